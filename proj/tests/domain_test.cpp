#include <random>

#include <doctest.h>

#include "hasfc/domain.hpp"
#include "oracles.hpp"

using namespace hasfc;

namespace {

NodeSpec unit_cost_node(std::string name) {
  NodeSpec s = testing::vims_node(std::move(name));
  s.hw.unit_cost = s.vm.unit_cost = s.vnf.unit_cost = 1;
  return s;
}

}  // namespace

TEST_CASE("steady_state_availability is the up-time ratio") {
  CHECK(steady_state_availability(999, 1) == doctest::Approx(0.999).epsilon(1e-15));
  CHECK(steady_state_availability(1, 1) == 0.5);
  // Five nines leaves about 5 min 15 s of yearly downtime.
  const double downtime_min = (1 - 0.99999) * 365 * 24 * 60;
  CHECK(downtime_min == doctest::Approx(5.256).epsilon(1e-9));
}

TEST_CASE("steady_state_availability rejects non-positive inputs") {
  CHECK_THROWS_AS(steady_state_availability(0, 1), ValidationError);
  CHECK_THROWS_AS(steady_state_availability(1, -2), ValidationError);
  try {
    steady_state_availability(0, 0);
    FAIL("expected throw");
  } catch (const ValidationError& e) {
    CHECK(e.errors().size() == 2);
  }
}

TEST_CASE("steady_state_availability is monotone in mttf and mttr") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const double mttf = testing::log_uniform(rng, 1, 1e7);
    const double mttr = testing::log_uniform(rng, 1e-3, 1e2);
    const double base = steady_state_availability(mttf, mttr);
    CHECK(steady_state_availability(mttf * 1.5, mttr) > base);
    CHECK(steady_state_availability(mttf, mttr * 1.5) < base);
  }
}

TEST_CASE("NodeConfig is canonical") {
  const NodeConfig a({0, 3, 3, 0});
  const NodeConfig b({3, 3});
  CHECK(a == b);
  CHECK(a.padded(4) == std::vector<int>{3, 3, 0, 0});
  CHECK(NodeConfig({1, 2}).padded(3) == std::vector<int>{2, 1, 0});
  CHECK(a.total_vnfs() == 6);
  CHECK(a.fits(2, 3));
  CHECK_FALSE(a.fits(1, 3));
  CHECK_FALSE(a.fits(2, 2));
  CHECK_THROWS_AS(NodeConfig({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(NodeConfig({2, -1}), std::invalid_argument);
}

TEST_CASE("node_cost examples") {
  const NodeSpec unit = unit_cost_node("S-CSCF");
  CHECK(node_cost(unit, NodeConfig({3, 3})) == 10);
  CHECK(node_cost(unit, NodeConfig({1})) == 3);

  NodeSpec mixed = unit;
  mixed.hw.unit_cost = 5;
  mixed.vm.unit_cost = 2;
  mixed.vnf.unit_cost = 0.5;
  CHECK(node_cost(mixed, NodeConfig({2, 1})) == 15.5);
}

TEST_CASE("chain_cost of the comparison chains") {
  const std::vector<NodeSpec> specs{unit_cost_node("P-CSCF"), unit_cost_node("I-CSCF"),
                                    unit_cost_node("S-CSCF"), unit_cost_node("HSS")};
  const ChainConfig four_nines{NodeConfig({3, 3}), NodeConfig({3, 3}), NodeConfig({1, 1, 1, 1}),
                               NodeConfig({2, 2, 2})};
  const ChainConfig five_nines{NodeConfig({3, 3}), NodeConfig({3, 3}), NodeConfig({3, 3}),
                               NodeConfig({4, 4})};
  CHECK(chain_cost(specs, four_nines) == 44);
  CHECK(chain_cost(specs, five_nines) == 42);
  CHECK(chain_cost(std::span(specs).first(1), ChainConfig{NodeConfig({1})}) == 3);
  CHECK_THROWS_AS(chain_cost(specs, ChainConfig{NodeConfig({1})}), ValidationError);
}

TEST_CASE("node_cost grows with every added replica or instance") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    NodeSpec s = testing::random_node(rng, "n");
    std::uniform_int_distribution<int> count(1, 6);
    std::vector<int> counts(std::uniform_int_distribution<int>(1, 4)(rng));
    for (int& c : counts) c = count(rng);
    const NodeConfig base(counts);
    const double cost = node_cost(s, base);

    std::vector<int> more_nr = counts;
    more_nr.push_back(count(rng));
    CHECK(node_cost(s, NodeConfig(more_nr)) > cost);

    std::vector<int> more_vnf = counts;
    more_vnf[std::uniform_int_distribution<size_t>(0, counts.size() - 1)(rng)] += 1;
    CHECK(node_cost(s, NodeConfig(more_vnf)) > cost);
  }
}

TEST_CASE("chain_cost is the sum of node costs") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<NodeSpec> specs;
    ChainConfig chain;
    double expected = 0;
    const int n = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int j = 0; j < n; ++j) {
      specs.push_back(testing::random_node(rng, "n" + std::to_string(j)));
      std::vector<int> counts(std::uniform_int_distribution<int>(1, 4)(rng));
      for (int& c : counts) c = std::uniform_int_distribution<int>(1, 6)(rng);
      chain.emplace_back(counts);
      expected += node_cost(specs.back(), chain.back());
    }
    CHECK(chain_cost(specs, chain) == expected);
  }
}

TEST_CASE("check_request reports every violation") {
  OptimizationRequest r = testing::vims_request();
  CHECK(check_request(r).empty());
  r.availability_target = 1.5;
  r.max_sfc = 0;
  r.nodes[1].vm.mttf = 0;
  r.nodes[2].name = "P-CSCF";
  const auto errors = check_request(r);
  REQUIRE(errors.size() == 4);
  CHECK(errors[0].path == "nodes[1].vm.mttf");
  CHECK(errors[1].path == "nodes[2].name");
  CHECK(errors[2].path == "availability_target");
  CHECK(errors[3].path == "max_sfc");
}

TEST_CASE("check_chain_config bounds") {
  const OptimizationRequest r = testing::vims_request();
  ChainConfig ok(4, NodeConfig({6, 6, 6, 6}));
  CHECK(check_chain_config(r, ok).empty());
  ChainConfig too_wide = ok;
  too_wide[2] = NodeConfig({1, 1, 1, 1, 1});
  CHECK(check_chain_config(r, too_wide).size() == 1);
  CHECK(check_chain_config(r, ChainConfig(3, NodeConfig({1}))).size() == 1);
}
