#include "hasfc/markov.hpp"

#include <cmath>

#include <fmt/format.h>

namespace hasfc {

namespace {

constexpr double kResidualTolerance = 1e-10;

void check_layer(std::vector<FieldError>& errors, const NodeSpec& spec, Layer layer) {
  const LayerParams& p = spec.layer(layer);
  const std::string base = fmt::format("{}.{}", spec.name, layer_name(layer));
  if (!(p.mttf > 0) || !std::isfinite(p.mttf)) errors.push_back({base + ".mttf", "must be > 0"});
  if (!(p.mttr > 0) || !std::isfinite(p.mttr)) errors.push_back({base + ".mttr", "must be > 0"});
}

}  // namespace

NrMarkovModel build_nr_model(const NodeSpec& spec, int k) {
  std::vector<FieldError> errors;
  if (k < 1) errors.push_back({"k", "a network replica needs at least one VNF instance"});
  for (Layer l : {Layer::kHw, Layer::kVm, Layer::kVnf}) check_layer(errors, spec, l);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  const double hw_fail = spec.hw.failure_rate();
  const double hw_repair = spec.hw.repair_rate();
  const double vm_fail = spec.vm.failure_rate();
  const double vm_repair = spec.vm.repair_rate();
  const double vnf_fail = spec.vnf.failure_rate();
  const double vnf_repair = spec.vnf.repair_rate();

  NrMarkovModel model;
  model.k = k;
  const int n = k + 3;
  Eigen::MatrixXd& q = model.generator;
  q = Eigen::MatrixXd::Zero(n, n);
  const int all_up = NrMarkovModel::op_state(k);

  q(NrMarkovModel::kHwDown, all_up) = hw_repair;
  q(NrMarkovModel::kVmDown, all_up) = vm_repair;
  q(NrMarkovModel::kVmDown, NrMarkovModel::kHwDown) = hw_fail;
  for (int v = 0; v <= k; ++v) {
    const int s = NrMarkovModel::op_state(v);
    q(s, NrMarkovModel::kHwDown) = hw_fail;
    q(s, NrMarkovModel::kVmDown) = vm_fail;
    if (v > 0) q(s, s - 1) = v * vnf_fail;
    if (v < k) q(s, s + 1) = (k - v) * vnf_repair;
  }
  for (int i = 0; i < n; ++i) {
    double out = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) out += q(i, j);
    }
    q(i, i) = -out;
  }
  return model;
}

bool gth_solve(const Eigen::MatrixXd& generator, Eigen::VectorXd& pi) {
  const Eigen::Index n = generator.rows();
  if (n == 0 || generator.cols() != n) return false;
  Eigen::MatrixXd p = generator;
  // Eliminate states from the last one down; only off-diagonal rates are
  // touched so no subtraction ever happens.
  for (Eigen::Index m = n - 1; m > 0; --m) {
    double scale = 0;
    for (Eigen::Index j = 0; j < m; ++j) scale += p(m, j);
    if (!(scale > 0)) return false;
    for (Eigen::Index i = 0; i < m; ++i) p(i, m) /= scale;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double pim = p(i, m);
      if (pim == 0) continue;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (j != i) p(i, j) += pim * p(m, j);
      }
    }
  }
  pi.resize(n);
  pi(0) = 1;
  for (Eigen::Index j = 1; j < n; ++j) {
    double acc = 0;
    for (Eigen::Index i = 0; i < j; ++i) acc += pi(i) * p(i, j);
    pi(j) = acc;
  }
  const double total = pi.sum();
  if (!(total > 0) || !std::isfinite(total)) return false;
  pi /= total;
  return true;
}

bool dense_solve(const Eigen::MatrixXd& generator, Eigen::VectorXd& pi) {
  const Eigen::Index n = generator.rows();
  if (n == 0 || generator.cols() != n) return false;
  Eigen::MatrixXd a = generator.transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return false;
  pi = lu.solve(b);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(pi(i)) || pi(i) < -1e-12) return false;
    if (pi(i) < 0) pi(i) = 0;
  }
  pi /= pi.sum();
  return true;
}

double stationary_residual(const Eigen::MatrixXd& generator, const Eigen::VectorXd& pi) {
  return (pi.transpose() * generator).cwiseAbs().maxCoeff();
}

SteadyState solve_steady_state(const Eigen::MatrixXd& generator) {
  if (generator.rows() != generator.cols() || generator.rows() == 0) {
    throw std::invalid_argument("generator must be a non-empty square matrix");
  }
  SteadyState out;
  if (gth_solve(generator, out.pi)) {
    out.method = SteadyStateMethod::kGth;
    out.residual = stationary_residual(generator, out.pi);
    if (out.residual <= kResidualTolerance) return out;
  }
  if (dense_solve(generator, out.pi)) {
    out.method = SteadyStateMethod::kDenseLu;
    out.residual = stationary_residual(generator, out.pi);
    if (out.residual <= kResidualTolerance) return out;
  }
  throw SingularModelError(fmt::format(
      "no unique stationary distribution for {}-state generator (reducible chain?)",
      generator.rows()));
}

}  // namespace hasfc
