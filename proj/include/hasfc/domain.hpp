#pragma once

/// @file domain.hpp
/// Value types shared by every stage of the pipeline: layer statistics,
/// node specifications, redundancy configurations and the optimization
/// request. Times are hours, costs are dimensionless units.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hasfc {

/// Failure/repair statistics and unit cost of one layer (HW, VM or VNF).
struct LayerParams {
  double mttf = 0;       // hours
  double mttr = 0;       // hours
  double unit_cost = 0;

  double failure_rate() const { return 1.0 / mttf; }
  double repair_rate() const { return 1.0 / mttr; }

  bool operator==(const LayerParams&) const = default;
};

enum class Layer { kHw, kVm, kVnf };

const char* layer_name(Layer layer);

struct NodeSpec {
  std::string name;
  LayerParams hw;
  LayerParams vm;
  LayerParams vnf;
  int min_active_vnfs = 1;

  const LayerParams& layer(Layer l) const;

  bool operator==(const NodeSpec&) const = default;
};

/// Multiset of per-replica VNF counts for one node. Always kept in canonical
/// non-increasing order with strictly positive entries, so two configurations
/// describing the same allocation compare equal.
class NodeConfig {
 public:
  NodeConfig() = default;
  /// Zeros are dropped and the counts sorted; throws std::invalid_argument if
  /// nothing but zeros (or a negative count) is given.
  explicit NodeConfig(std::vector<int> counts);

  std::span<const int> counts() const { return counts_; }
  int replica_count() const { return static_cast<int>(counts_.size()); }
  int total_vnfs() const;
  int max_count() const { return counts_.empty() ? 0 : counts_.front(); }

  /// Canonical counts padded with zeros to `width` entries, e.g. [3,3,0,0].
  std::vector<int> padded(int width) const;

  /// True when every count fits in [1, max_vnf] and there are at most
  /// max_nr replicas.
  bool fits(int max_nr, int max_vnf) const;

  auto operator<=>(const NodeConfig&) const = default;

 private:
  std::vector<int> counts_;
};

using ChainConfig = std::vector<NodeConfig>;

/// Lexicographic order over node configurations, used as the final
/// deterministic tie-breaker everywhere chains are ranked.
bool chain_config_less(const ChainConfig& a, const ChainConfig& b);

struct EvaluatedChain {
  ChainConfig config;
  double availability = 0;
  double cost = 0;

  bool operator==(const EvaluatedChain&) const = default;
};

enum class EvalMode { kExact, kStructural };

const char* eval_mode_name(EvalMode mode);

struct OptimizationRequest {
  std::vector<NodeSpec> nodes;
  double availability_target = 0;
  int max_nr = 1;
  int max_vnf = 1;
  int max_sfc = 1;
  EvalMode eval_mode = EvalMode::kExact;

  bool operator==(const OptimizationRequest&) const = default;
};

/// One violated constraint, addressed by a JSON-pointer-like path such as
/// "nodes[2].vm.mttf".
struct FieldError {
  std::string path;
  std::string message;

  bool operator==(const FieldError&) const = default;
};

std::string to_string(const FieldError& error);

/// Raised when an operation receives input that breaks a documented
/// precondition. Carries every violation found, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldError> errors);
  ValidationError(std::string path, std::string message);

  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Long-run fraction of time a two-state element is up.
double steady_state_availability(double mttf, double mttr);

/// Sum over replicas of hw + vm + k * vnf unit costs.
double node_cost(const NodeSpec& spec, const NodeConfig& config);

/// Node costs summed left to right in chain order.
double chain_cost(std::span<const NodeSpec> specs, const ChainConfig& config);

/// Semantic checks on an already-typed request; returns an empty list when
/// the request is valid.
std::vector<FieldError> check_request(const OptimizationRequest& request);

/// Checks a chain configuration against the request bounds and node count.
std::vector<FieldError> check_chain_config(const OptimizationRequest& request,
                                           const ChainConfig& config);

}  // namespace hasfc
