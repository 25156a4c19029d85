#pragma once

/// @file markov.hpp
/// Continuous-time Markov chain realizing one Network Replica (a HW + VM
/// stack hosting k VNF instances) and its steady-state solution.
///
/// State layout, k + 3 states in total:
///   0        HwDown   hardware failed; VM and VNFs inhibited
///   1        VmDown   VM failed on working hardware; VNFs inhibited
///   2 + v    Op(v)    HW and VM up, exactly v of k VNF instances working
///
/// Repairing HW or VM restores every layer above it to the all-working
/// state Op(k), so a single HwDown state is enough regardless of what the
/// upper layers were doing when the hardware failed.

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hasfc/domain.hpp"

namespace hasfc {

/// Raised when a generator has no unique stationary distribution.
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NrMarkovModel {
  static constexpr int kHwDown = 0;
  static constexpr int kVmDown = 1;
  static constexpr int op_state(int working) { return 2 + working; }

  int k = 0;
  Eigen::MatrixXd generator;  // rows sum to zero, rates in 1/hours

  int state_count() const { return static_cast<int>(generator.rows()); }
  /// Number of working VNF instances in `state`.
  int working_instances(int state) const { return state < 2 ? 0 : state - 2; }
};

/// Throws ValidationError for k < 1 or non-positive layer statistics.
NrMarkovModel build_nr_model(const NodeSpec& spec, int k);

enum class SteadyStateMethod { kGth, kDenseLu };

struct SteadyState {
  Eigen::VectorXd pi;
  SteadyStateMethod method = SteadyStateMethod::kGth;
  double residual = 0;  // max_j |(pi Q)_j|
};

/// Grassmann-Taksar-Heyman elimination. Returns false if the chain turns
/// out to be reducible (a zero pivot).
bool gth_solve(const Eigen::MatrixXd& generator, Eigen::VectorXd& pi);

/// Dense LU on pi Q = 0 with one balance equation replaced by sum(pi) = 1.
bool dense_solve(const Eigen::MatrixXd& generator, Eigen::VectorXd& pi);

/// Infinity norm of pi * Q.
double stationary_residual(const Eigen::MatrixXd& generator, const Eigen::VectorXd& pi);

/// GTH first, dense LU if GTH fails or leaves a residual above 1e-10.
/// Throws SingularModelError when neither gives a valid distribution.
SteadyState solve_steady_state(const Eigen::MatrixXd& generator);

inline SteadyState solve_steady_state(const NrMarkovModel& model) {
  return solve_steady_state(model.generator);
}

}  // namespace hasfc
