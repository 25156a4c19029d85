#pragma once

/// @file optimizer.hpp
/// Chain composition and selection: enumerate per-node redundancy plans,
/// keep each node's cost/availability Pareto frontier, then search the
/// product of frontiers for the cheapest chains meeting the target.
///
/// Result contract of select_top_k: the feasible chains (availability >= A0)
/// that no other chain dominates, ordered by cost ascending, availability
/// descending, then configuration, truncated to max_sfc entries. Chains are
/// produced in exactly that order by a best-first search, so the search can
/// stop as soon as max_sfc chains are accepted.

#include <chrono>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hasfc/domain.hpp"

namespace hasfc {

struct NodeCandidate {
  NodeConfig config;
  double availability = 0;
  double cost = 0;

  bool operator==(const NodeCandidate&) const = default;
};

struct SearchReport {
  boost::multiprecision::cpp_int raw_chain_count;     // product of config counts
  boost::multiprecision::cpp_int pruned_chain_count;  // product of frontier sizes
  std::uint64_t explored = 0;                          // search queue pops
  int model_solves = 0;                                // replica models solved
  std::chrono::duration<double, std::milli> wall_time{0};
};

/// "1.908e+09" style rendering of a big count.
std::string scientific(const boost::multiprecision::cpp_int& value);

struct SelectionResult {
  std::vector<EvaluatedChain> chains;
  SearchReport report;
  bool feasible = false;
  /// Product of per-node maximum availabilities.
  double max_achievable_availability = 0;
  /// The chain reaching that maximum, cheapest where nodes tie.
  EvaluatedChain most_available;
};

/// Every multiset of 1..max_nr replica counts drawn from 1..max_vnf, in
/// canonical form. Ordered by replica count, then lexicographically.
std::vector<NodeConfig> enumerate_node_configs(int max_nr, int max_vnf);

/// Number of configs enumerate_node_configs would return.
boost::multiprecision::cpp_int node_config_count(int max_nr, int max_vnf);

/// Non-dominated candidates sorted by ascending cost. Among candidates equal
/// in both objectives only the smallest configuration survives.
std::vector<NodeCandidate> pareto_prune(std::vector<NodeCandidate> candidates);

/// Candidates for every enumerated config of every node. Each distinct
/// (node, k) replica model is solved once.
std::vector<std::vector<NodeCandidate>> evaluate_all_nodes(const OptimizationRequest& request,
                                                           int* model_solves = nullptr);

/// Best-first search over the product of the given frontiers (each sorted
/// by ascending cost). The report's raw count is left for the caller.
SelectionResult select_top_k(const std::vector<std::vector<NodeCandidate>>& frontiers,
                             double availability_target, int max_sfc);

/// Total order used for ranking chains.
bool chain_rank_less(const EvaluatedChain& a, const EvaluatedChain& b);

/// True iff a is at least as good as b in both objectives and strictly
/// better in one.
bool dominates(double a_avail, double a_cost, double b_avail, double b_cost);

/// The whole pipeline for one validated request.
SelectionResult optimize(const OptimizationRequest& request);

}  // namespace hasfc
