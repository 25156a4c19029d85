#include <random>

#include <doctest.h>

#include "hasfc/markov.hpp"
#include "oracles.hpp"

using namespace hasfc;

namespace {

NodeSpec k3_spec() { return testing::vims_node("S-CSCF"); }

}  // namespace

TEST_CASE("replica model has k + 3 states and the documented transitions") {
  const NrMarkovModel m = build_nr_model(k3_spec(), 2);
  CHECK(m.state_count() == 5);
  const Eigen::MatrixXd& q = m.generator;
  const double lh = 1.0 / 60000, mh = 1.0 / 8, lv = 1.0 / 5000, mv = 1.0, lf = 1.0 / 3000,
               mf = 2.0;
  const int hw = NrMarkovModel::kHwDown, vm = NrMarkovModel::kVmDown;
  auto op = NrMarkovModel::op_state;
  CHECK(q(hw, op(2)) == mh);
  CHECK(q(vm, op(2)) == mv);
  CHECK(q(vm, hw) == lh);
  CHECK(q(hw, vm) == 0);
  CHECK(q(hw, op(0)) == 0);
  CHECK(q(vm, op(0)) == 0);
  for (int v = 0; v <= 2; ++v) {
    CHECK(q(op(v), hw) == lh);
    CHECK(q(op(v), vm) == lv);
  }
  CHECK(q(op(2), op(1)) == doctest::Approx(2 * lf));
  CHECK(q(op(1), op(0)) == doctest::Approx(lf));
  CHECK(q(op(0), op(1)) == doctest::Approx(2 * mf));
  CHECK(q(op(1), op(2)) == doctest::Approx(mf));
  CHECK(q(op(0), op(2)) == 0);
  CHECK(m.working_instances(op(1)) == 1);
  CHECK(m.working_instances(vm) == 0);
}

TEST_CASE("generator rows sum to zero") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const NodeSpec s = testing::random_node(rng, "n");
    const int k = 1 + i % 6;
    const Eigen::MatrixXd& q = build_nr_model(s, k).generator;
    for (int r = 0; r < q.rows(); ++r) {
      const double scale = q.row(r).cwiseAbs().maxCoeff();
      CHECK(std::abs(q.row(r).sum()) <= 1e-12 * std::max(1.0, scale));
      for (int c = 0; c < q.cols(); ++c) {
        if (c != r) CHECK(q(r, c) >= 0);
      }
    }
  }
}

TEST_CASE("invalid replica models are rejected") {
  CHECK_THROWS_AS(build_nr_model(k3_spec(), 0), ValidationError);
  NodeSpec bad = k3_spec();
  bad.vnf.mttr = 0;
  CHECK_THROWS_AS(build_nr_model(bad, 2), ValidationError);
}

TEST_CASE("two-state chain") {
  const double lambda = 0.01, mu = 3;
  Eigen::MatrixXd q(2, 2);
  q << -lambda, lambda, mu, -mu;
  const SteadyState s = solve_steady_state(q);
  CHECK(s.method == SteadyStateMethod::kGth);
  CHECK(s.pi(0) == doctest::Approx(mu / (lambda + mu)).epsilon(1e-15));
  CHECK(s.pi(1) == doctest::Approx(lambda / (lambda + mu)).epsilon(1e-15));
}

TEST_CASE("symmetric 3-cycle is uniform") {
  Eigen::MatrixXd q(3, 3);
  q << -2, 1, 1, 1, -2, 1, 1, 1, -2;
  const SteadyState s = solve_steady_state(q);
  for (int i = 0; i < 3; ++i) CHECK(s.pi(i) == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("k=3 replica model matches frozen extended-precision solve") {
  // Reference values from a 50-digit LU solve of pi Q = 0, sum(pi) = 1 for
  // HW 60000/8, VM 5000/1, VNF 3000/0.5.
  const double expected[] = {1.3331555792560991868e-4, 1.9993001871769271126e-4,
                             4.624855104948567371e-12, 8.3250398044892429248e-8,
                             4.9952944615179707463e-4, 0.9991671417221820003};
  const NrMarkovModel m = build_nr_model(k3_spec(), 3);
  const SteadyState s = solve_steady_state(m);
  REQUIRE(s.pi.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(s.pi(i) - expected[i]) <= 1e-10);
    CHECK(s.pi(i) == doctest::Approx(expected[i]).epsilon(1e-12));
  }
  CHECK(s.residual <= 1e-10);
  const Eigen::VectorXd oracle = testing::dense_stationary_oracle(m.generator);
  CHECK((s.pi - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("GTH agrees with the dense oracle on stiff random models") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 100; ++i) {
    const NodeSpec s = testing::random_node(rng, "n");
    const int k = 1 + i % 6;
    const NrMarkovModel m = build_nr_model(s, k);
    const SteadyState st = solve_steady_state(m);
    CHECK(st.method == SteadyStateMethod::kGth);
    CHECK(st.residual <= 1e-10);
    CHECK(std::abs(st.pi.sum() - 1) <= 1e-12);
    CHECK((st.pi.array() >= 0).all());
    const Eigen::VectorXd oracle = testing::dense_stationary_oracle(m.generator);
    CHECK((st.pi - oracle).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("dense LU path agrees with GTH") {
  const NrMarkovModel m = build_nr_model(k3_spec(), 4);
  Eigen::VectorXd gth, lu;
  REQUIRE(gth_solve(m.generator, gth));
  REQUIRE(dense_solve(m.generator, lu));
  CHECK((gth - lu).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reducible chain raises a singularity error") {
  // Two absorbing states.
  Eigen::MatrixXd q(3, 3);
  q << 0, 0, 0, 1, -2, 1, 0, 0, 0;
  Eigen::VectorXd pi;
  CHECK_FALSE(gth_solve(q, pi));
  CHECK_FALSE(dense_solve(q, pi));
  CHECK_THROWS_AS(solve_steady_state(q), SingularModelError);
}

TEST_CASE("degenerate reduction to the hardware two-state chain") {
  NodeSpec s = k3_spec();
  s.vm.mttf = s.vnf.mttf = 1e12;
  const SteadyState st = solve_steady_state(build_nr_model(s, 1));
  const double up = st.pi(NrMarkovModel::op_state(1)) + st.pi(NrMarkovModel::op_state(0)) +
                    st.pi(NrMarkovModel::kVmDown);
  CHECK(std::abs(up - steady_state_availability(60000, 8)) <= 1e-9);
}
