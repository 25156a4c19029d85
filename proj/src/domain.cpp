#include "hasfc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <fmt/format.h>

namespace hasfc {

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::kHw: return "hw";
    case Layer::kVm: return "vm";
    case Layer::kVnf: return "vnf";
  }
  return "?";
}

const LayerParams& NodeSpec::layer(Layer l) const {
  switch (l) {
    case Layer::kHw: return hw;
    case Layer::kVm: return vm;
    case Layer::kVnf: return vnf;
  }
  throw std::invalid_argument("unknown layer");
}

NodeConfig::NodeConfig(std::vector<int> counts) {
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative VNF count");
    if (c > 0) counts_.push_back(c);
  }
  if (counts_.empty()) throw std::invalid_argument("node config has no replica");
  std::sort(counts_.begin(), counts_.end(), std::greater<>());
}

int NodeConfig::total_vnfs() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

std::vector<int> NodeConfig::padded(int width) const {
  std::vector<int> out(counts_.begin(), counts_.end());
  if (static_cast<int>(out.size()) < width) out.resize(width, 0);
  return out;
}

bool NodeConfig::fits(int max_nr, int max_vnf) const {
  return !counts_.empty() && replica_count() <= max_nr && counts_.front() <= max_vnf;
}

bool chain_config_less(const ChainConfig& a, const ChainConfig& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

const char* eval_mode_name(EvalMode mode) {
  return mode == EvalMode::kExact ? "exact" : "structural";
}

std::string to_string(const FieldError& error) {
  if (error.path.empty()) return error.message;
  return error.path + ": " + error.message;
}

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += to_string(e);
  }
  return out;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0; }

}  // namespace

ValidationError::ValidationError(std::vector<FieldError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ValidationError::ValidationError(std::string path, std::string message)
    : ValidationError(std::vector<FieldError>{{std::move(path), std::move(message)}}) {}

double steady_state_availability(double mttf, double mttr) {
  std::vector<FieldError> errors;
  if (!positive_finite(mttf)) errors.push_back({"mttf", "must be > 0"});
  if (!positive_finite(mttr)) errors.push_back({"mttr", "must be > 0"});
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return mttf / (mttf + mttr);
}

double node_cost(const NodeSpec& spec, const NodeConfig& config) {
  double cost = 0;
  for (int k : config.counts()) {
    cost += spec.hw.unit_cost + spec.vm.unit_cost + k * spec.vnf.unit_cost;
  }
  return cost;
}

double chain_cost(std::span<const NodeSpec> specs, const ChainConfig& config) {
  if (specs.size() != config.size()) {
    throw ValidationError("chain", fmt::format("expected {} node configs, got {}",
                                               specs.size(), config.size()));
  }
  double cost = 0;
  for (size_t i = 0; i < specs.size(); ++i) cost += node_cost(specs[i], config[i]);
  return cost;
}

std::vector<FieldError> check_request(const OptimizationRequest& request) {
  std::vector<FieldError> errors;
  if (request.nodes.empty()) errors.push_back({"nodes", "at least one node is required"});
  for (size_t i = 0; i < request.nodes.size(); ++i) {
    const NodeSpec& node = request.nodes[i];
    const std::string base = fmt::format("nodes[{}]", i);
    if (node.name.empty()) errors.push_back({base + ".name", "must be a non-empty string"});
    for (size_t j = 0; j < i; ++j) {
      if (!node.name.empty() && request.nodes[j].name == node.name) {
        errors.push_back({base + ".name", fmt::format("duplicate node name \"{}\"", node.name)});
        break;
      }
    }
    for (Layer l : {Layer::kHw, Layer::kVm, Layer::kVnf}) {
      const LayerParams& p = node.layer(l);
      const std::string lp = fmt::format("{}.{}", base, layer_name(l));
      if (!positive_finite(p.mttf)) errors.push_back({lp + ".mttf", "must be > 0"});
      if (!positive_finite(p.mttr)) errors.push_back({lp + ".mttr", "must be > 0"});
      if (!std::isfinite(p.unit_cost) || p.unit_cost < 0) {
        errors.push_back({lp + ".cost", "must be >= 0"});
      }
    }
    if (node.min_active_vnfs < 1) errors.push_back({base + ".min_active_vnfs", "must be >= 1"});
  }
  const double a0 = request.availability_target;
  if (!(a0 > 0 && a0 < 1)) errors.push_back({"availability_target", "must be in (0,1)"});
  if (request.max_nr < 1) errors.push_back({"max_nr", "must be >= 1"});
  if (request.max_vnf < 1) errors.push_back({"max_vnf", "must be >= 1"});
  if (request.max_sfc < 1) errors.push_back({"max_sfc", "must be >= 1"});
  return errors;
}

std::vector<FieldError> check_chain_config(const OptimizationRequest& request,
                                           const ChainConfig& config) {
  std::vector<FieldError> errors;
  if (config.size() != request.nodes.size()) {
    errors.push_back({"chain", fmt::format("expected {} node configs, got {}",
                                           request.nodes.size(), config.size())});
    return errors;
  }
  for (size_t i = 0; i < config.size(); ++i) {
    if (!config[i].fits(request.max_nr, request.max_vnf)) {
      errors.push_back({fmt::format("chain[{}]", i),
                        fmt::format("needs 1..{} replicas with 1..{} VNFs each",
                                    request.max_nr, request.max_vnf)});
    }
  }
  return errors;
}

}  // namespace hasfc
