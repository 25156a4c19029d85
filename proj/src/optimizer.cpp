#include "hasfc/optimizer.hpp"

#include <algorithm>
#include <optional>
#include <queue>

#include <fmt/format.h>

#include "hasfc/availability.hpp"

namespace hasfc {

using boost::multiprecision::cpp_int;

std::string scientific(const cpp_int& value) {
  return fmt::format("{:.3e}", value.convert_to<double>());
}

namespace {

void append_configs(int remaining, int max_value, std::vector<int>& prefix,
                    std::vector<NodeConfig>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int v = 1; v <= max_value; ++v) {
    prefix.push_back(v);
    append_configs(remaining - 1, v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<NodeConfig> enumerate_node_configs(int max_nr, int max_vnf) {
  std::vector<NodeConfig> out;
  std::vector<int> prefix;
  for (int r = 1; r <= max_nr; ++r) append_configs(r, max_vnf, prefix, out);
  return out;
}

cpp_int node_config_count(int max_nr, int max_vnf) {
  // Multisets of size r from max_vnf values: C(max_vnf + r - 1, r).
  cpp_int total = 0;
  for (int r = 1; r <= max_nr; ++r) {
    cpp_int c = 1;
    for (int i = 1; i <= r; ++i) c = c * (max_vnf + i - 1) / i;
    total += c;
  }
  return total;
}

bool dominates(double a_avail, double a_cost, double b_avail, double b_cost) {
  return a_avail >= b_avail && a_cost <= b_cost && (a_avail > b_avail || a_cost < b_cost);
}

bool chain_rank_less(const EvaluatedChain& a, const EvaluatedChain& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.availability != b.availability) return a.availability > b.availability;
  return chain_config_less(a.config, b.config);
}

std::vector<NodeCandidate> pareto_prune(std::vector<NodeCandidate> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const NodeCandidate& a, const NodeCandidate& b) {
              if (a.cost != b.cost) return a.cost < b.cost;
              if (a.availability != b.availability) return a.availability > b.availability;
              return a.config < b.config;
            });
  std::vector<NodeCandidate> frontier;
  for (auto& c : candidates) {
    // Everything kept so far is at most as expensive, so c survives only by
    // being strictly more available than all of it.
    if (frontier.empty() || c.availability > frontier.back().availability) {
      frontier.push_back(std::move(c));
    }
  }
  return frontier;
}

std::vector<std::vector<NodeCandidate>> evaluate_all_nodes(const OptimizationRequest& request,
                                                           int* model_solves) {
  const std::vector<NodeConfig> configs = enumerate_node_configs(request.max_nr, request.max_vnf);
  DistributionCache cache;
  std::vector<std::vector<NodeCandidate>> out;
  out.reserve(request.nodes.size());
  for (const NodeSpec& spec : request.nodes) {
    std::vector<NodeCandidate> node;
    node.reserve(configs.size());
    for (const NodeConfig& config : configs) {
      node.push_back({config, node_availability(spec, config, request.eval_mode, cache),
                      node_cost(spec, config)});
    }
    out.push_back(std::move(node));
  }
  if (model_solves) *model_solves = cache.solves();
  return out;
}

namespace {

struct SearchItem {
  double cost;         // exact for complete chains, admissible lower bound otherwise
  double availability; // exact for complete chains, optimistic bound otherwise
  bool complete;
  std::vector<int> picks;  // frontier index per fixed node
};

class BestFirstSearch {
 public:
  BestFirstSearch(const std::vector<std::vector<NodeCandidate>>& frontiers, double target,
                  int max_sfc)
      : frontiers_(frontiers), target_(target), max_sfc_(max_sfc) {
    // Cheapest and most available option per node; frontiers are sorted by
    // cost so these are the first and last entries.
    for (const auto& f : frontiers_) {
      min_cost_.push_back(f.front().cost);
      max_avail_.push_back(f.back().availability);
    }
  }

  SelectionResult run() {
    SelectionResult result;
    result.max_achievable_availability = 1;
    for (size_t i = 0; i < frontiers_.size(); ++i) {
      result.max_achievable_availability *= max_avail_[i];
      result.most_available.config.push_back(frontiers_[i].back().config);
      result.most_available.cost += frontiers_[i].back().cost;
    }
    result.most_available.availability = result.max_achievable_availability;

    auto later = [this](const SearchItem& a, const SearchItem& b) { return ranks_before(b, a); };
    std::priority_queue<SearchItem, std::vector<SearchItem>, decltype(later)> queue(later);
    if (auto root = make_item({}); root) queue.push(std::move(*root));

    while (!queue.empty() && static_cast<int>(result.chains.size()) < max_sfc_) {
      SearchItem item = queue.top();
      queue.pop();
      ++result.report.explored;
      if (is_dominated(item.cost, item.availability)) continue;
      if (item.complete) {
        accept(item, result);
        continue;
      }
      const size_t depth = item.picks.size();
      for (size_t j = 0; j < frontiers_[depth].size(); ++j) {
        std::vector<int> picks = item.picks;
        picks.push_back(static_cast<int>(j));
        if (auto child = make_item(std::move(picks)); child) queue.push(std::move(*child));
      }
    }
    result.feasible = !result.chains.empty();
    return result;
  }

 private:
  // Bounds are accumulated left to right in node order, the same order in
  // which chain_cost and chain_availability combine node values. Rounding is
  // monotone, so a bound never undercuts any of its completions.
  std::optional<SearchItem> make_item(std::vector<int> picks) const {
    const size_t n = frontiers_.size();
    double cost = 0;
    double avail = 1;
    for (size_t i = 0; i < n; ++i) {
      if (i < picks.size()) {
        const NodeCandidate& c = frontiers_[i][picks[i]];
        cost += c.cost;
        avail *= c.availability;
      } else {
        cost += min_cost_[i];
        avail *= max_avail_[i];
      }
    }
    if (avail < target_) return std::nullopt;
    if (is_dominated(cost, avail)) return std::nullopt;
    const bool complete = picks.size() == n;
    return SearchItem{cost, avail, complete, std::move(picks)};
  }

  // Pops complete chains in final rank order; a partial item sorts before
  // complete chains of equal cost so its completions are ranked first.
  bool ranks_before(const SearchItem& a, const SearchItem& b) const {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.complete != b.complete) return !a.complete;
    if (a.availability != b.availability) return a.availability > b.availability;
    if (a.picks.size() != b.picks.size()) return a.picks.size() > b.picks.size();
    for (size_t i = 0; i < a.picks.size(); ++i) {
      const NodeConfig& ca = frontiers_[i][a.picks[i]].config;
      const NodeConfig& cb = frontiers_[i][b.picks[i]].config;
      if (ca != cb) return ca < cb;
    }
    return false;
  }

  // Accepted chains are never more expensive than anything still queued, and
  // a bound dominated by one of them means every completion is too.
  bool is_dominated(double cost, double avail) const {
    for (const auto& [c, a] : accepted_) {
      if (dominates(a, c, avail, cost)) return true;
    }
    return false;
  }

  void accept(const SearchItem& item, SelectionResult& result) {
    EvaluatedChain chain;
    for (size_t i = 0; i < item.picks.size(); ++i) {
      chain.config.push_back(frontiers_[i][item.picks[i]].config);
    }
    chain.cost = item.cost;
    chain.availability = item.availability;
    accepted_.emplace_back(item.cost, item.availability);
    result.chains.push_back(std::move(chain));
  }

  const std::vector<std::vector<NodeCandidate>>& frontiers_;
  double target_;
  int max_sfc_;
  std::vector<double> min_cost_;
  std::vector<double> max_avail_;
  std::vector<std::pair<double, double>> accepted_;
};

}  // namespace

SelectionResult select_top_k(const std::vector<std::vector<NodeCandidate>>& frontiers,
                             double availability_target, int max_sfc) {
  if (frontiers.empty()) throw ValidationError("nodes", "at least one node is required");
  for (size_t i = 0; i < frontiers.size(); ++i) {
    if (frontiers[i].empty()) {
      throw ValidationError(fmt::format("nodes[{}]", i), "empty candidate frontier");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  SelectionResult result = BestFirstSearch(frontiers, availability_target, max_sfc).run();
  result.report.pruned_chain_count = 1;
  for (const auto& f : frontiers) result.report.pruned_chain_count *= f.size();
  result.report.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

SelectionResult optimize(const OptimizationRequest& request) {
  if (auto errors = check_request(request); !errors.empty()) throw ValidationError(errors);
  const auto start = std::chrono::steady_clock::now();
  int solves = 0;
  auto candidates = evaluate_all_nodes(request, &solves);
  std::vector<std::vector<NodeCandidate>> frontiers;
  frontiers.reserve(candidates.size());
  for (auto& node : candidates) frontiers.push_back(pareto_prune(std::move(node)));

  SelectionResult result =
      select_top_k(frontiers, request.availability_target, request.max_sfc);
  const cpp_int per_node = node_config_count(request.max_nr, request.max_vnf);
  result.report.raw_chain_count = 1;
  for (size_t i = 0; i < request.nodes.size(); ++i) result.report.raw_chain_count *= per_node;
  result.report.model_solves = solves;
  result.report.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

}  // namespace hasfc
