#include "hasfc/availability.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hasfc/markov.hpp"

namespace hasfc {

double InstanceDistribution::below(int threshold) const {
  double p = 0;
  for (int v = 0; v < threshold && v < static_cast<int>(probs.size()); ++v) p += probs[v];
  return p;
}

InstanceDistribution nr_instance_distribution(const NodeSpec& spec, int k) {
  const NrMarkovModel model = build_nr_model(spec, k);
  const SteadyState steady = solve_steady_state(model);
  InstanceDistribution dist;
  dist.probs.assign(k + 1, 0.0);
  for (int v = 0; v <= k; ++v) dist.probs[v] = steady.pi(NrMarkovModel::op_state(v));
  // Restoration makes the HW/VM process independent of the VNF states, so
  // its down mass has a closed form that does not depend on k. Taking it
  // from the solve instead lets rounding make availability wobble with k.
  dist.probs[0] += host_down_probability(spec);
  return dist;
}

double host_down_probability(const NodeSpec& spec) {
  const double lh = spec.hw.failure_rate(), mh = spec.hw.repair_rate();
  const double lv = spec.vm.failure_rate(), mv = spec.vm.repair_rate();
  const double hw_down = lh / (lh + mh);
  const double vm_down = lv * (1 - hw_down) / (lv + lh + mv);
  return hw_down + vm_down;
}

InstanceDistribution structural_instance_distribution(const NodeSpec& spec, int k) {
  if (k < 1) throw ValidationError("k", "a network replica needs at least one VNF instance");
  const double hw = steady_state_availability(spec.hw.mttf, spec.hw.mttr);
  const double vm = steady_state_availability(spec.vm.mttf, spec.vm.mttr);
  const double vnf = steady_state_availability(spec.vnf.mttf, spec.vnf.mttr);
  const double vnf_down = spec.vnf.mttr / (spec.vnf.mttf + spec.vnf.mttr);
  const double host = hw * vm;
  const double hw_down = spec.hw.mttr / (spec.hw.mttf + spec.hw.mttr);
  const double vm_down = spec.vm.mttr / (spec.vm.mttf + spec.vm.mttr);

  InstanceDistribution dist;
  dist.probs.assign(k + 1, 0.0);
  double binom = 1;
  for (int v = 1; v <= k; ++v) {
    binom = binom * (k - v + 1) / v;
    dist.probs[v] = host * binom * std::pow(vnf, v) * std::pow(vnf_down, k - v);
  }
  // Not 1 - sum(probs[1..k]): that would cancel catastrophically.
  dist.probs[0] = (hw_down + hw * vm_down) + host * std::pow(vnf_down, k);
  return dist;
}

InstanceDistribution instance_distribution(const NodeSpec& spec, int k, EvalMode mode) {
  return mode == EvalMode::kExact ? nr_instance_distribution(spec, k)
                                  : structural_instance_distribution(spec, k);
}

InstanceDistribution convolve(const InstanceDistribution& a, const InstanceDistribution& b) {
  InstanceDistribution out;
  out.probs.assign(a.probs.size() + b.probs.size() - 1, 0.0);
  for (size_t i = 0; i < a.probs.size(); ++i) {
    for (size_t j = 0; j < b.probs.size(); ++j) out.probs[i + j] += a.probs[i] * b.probs[j];
  }
  return out;
}

const InstanceDistribution& DistributionCache::get(const NodeSpec& spec, int k, EvalMode mode) {
  auto key = std::make_tuple(spec.name, k, mode);
  auto it = table_.find(key);
  if (it == table_.end()) {
    it = table_.emplace(std::move(key), instance_distribution(spec, k, mode)).first;
    ++solves_;
  }
  return it->second;
}

double node_availability(const NodeSpec& spec, const NodeConfig& config, EvalMode mode,
                         DistributionCache& cache) {
  if (config.replica_count() == 0) {
    throw ValidationError(spec.name, "node config has no replica");
  }
  if (spec.min_active_vnfs <= 1) {
    // Closed form of the threshold-1 case: the node is down only when every
    // replica has zero working instances.
    double all_down = 1;
    for (int k : config.counts()) all_down *= cache.get(spec, k, mode).probs[0];
    return 1 - all_down;
  }
  if (spec.min_active_vnfs > config.total_vnfs()) return 0;
  InstanceDistribution total{{1.0}};
  for (int k : config.counts()) total = convolve(total, cache.get(spec, k, mode));
  const double down = total.below(spec.min_active_vnfs);
  return down >= 1 ? 0.0 : 1 - down;
}

double node_availability(const NodeSpec& spec, const NodeConfig& config, EvalMode mode) {
  DistributionCache cache;
  return node_availability(spec, config, mode, cache);
}

double chain_availability(std::span<const NodeSpec> specs, const ChainConfig& config,
                          EvalMode mode, DistributionCache& cache) {
  if (specs.size() != config.size()) {
    throw ValidationError("chain", fmt::format("expected {} node configs, got {}",
                                               specs.size(), config.size()));
  }
  double a = 1;
  for (size_t i = 0; i < specs.size(); ++i) a *= node_availability(specs[i], config[i], mode, cache);
  return a;
}

double chain_availability(std::span<const NodeSpec> specs, const ChainConfig& config,
                          EvalMode mode) {
  DistributionCache cache;
  return chain_availability(specs, config, mode, cache);
}

}  // namespace hasfc
