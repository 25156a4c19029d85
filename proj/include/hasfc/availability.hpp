#pragma once

// Composition of replica models into node and chain availabilities.
//
// Replicas of a node fail independently, so the node's working-instance count
// is the convolution of the per-replica distributions. A node is up while at
// least min_active_vnfs instances work; a chain is a series system.

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "hasfc/domain.hpp"

namespace hasfc {

/// probs[v] = long-run probability that exactly v of the replica's k VNF
/// instances work. HW-down and VM-down time counts towards v = 0.
struct InstanceDistribution {
  std::vector<double> probs;

  int k() const { return static_cast<int>(probs.size()) - 1; }
  /// P(v < threshold), summed directly so small tails keep their precision.
  double below(int threshold) const;
};

/// Exact distribution from the replica's steady state.
InstanceDistribution nr_instance_distribution(const NodeSpec& spec, int k);

/// Long-run fraction of time the replica's HW or VM is down.
double host_down_probability(const NodeSpec& spec);

/// Product-form approximation: layers treated as independent two-state
/// elements, instances binomial given HW and VM up. Ignores inhibition and
/// restoration.
InstanceDistribution structural_instance_distribution(const NodeSpec& spec, int k);

InstanceDistribution instance_distribution(const NodeSpec& spec, int k, EvalMode mode);

/// Distribution of the sum of independent counts.
InstanceDistribution convolve(const InstanceDistribution& a, const InstanceDistribution& b);

/// Memo of replica distributions keyed by (node name, k, mode). Not
/// synchronized: each request owns one.
class DistributionCache {
 public:
  const InstanceDistribution& get(const NodeSpec& spec, int k, EvalMode mode);
  /// Number of replica models actually solved so far.
  int solves() const { return solves_; }

 private:
  std::map<std::tuple<std::string, int, EvalMode>, InstanceDistribution> table_;
  int solves_ = 0;
};

double node_availability(const NodeSpec& spec, const NodeConfig& config, EvalMode mode);
double node_availability(const NodeSpec& spec, const NodeConfig& config, EvalMode mode,
                         DistributionCache& cache);

/// Product of node availabilities, multiplied left to right in chain order.
double chain_availability(std::span<const NodeSpec> specs, const ChainConfig& config,
                          EvalMode mode);
double chain_availability(std::span<const NodeSpec> specs, const ChainConfig& config,
                          EvalMode mode, DistributionCache& cache);

}  // namespace hasfc
