#include "hasfc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>

#include <fmt/format.h>

namespace hasfc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

enum class EventKind { kHwFail, kHwRepair, kVmFail, kVmRepair, kVnfFail, kVnfRepair };

struct Event {
  double time;
  std::uint64_t seq;
  int replica;
  EventKind kind;
  int instance;
  std::uint64_t epoch;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Replica {
  int node = 0;
  const NodeSpec* spec = nullptr;
  bool hw_up = true;
  bool vm_up = true;
  std::vector<char> instance_up;
  int up_instances = 0;
  // VM and VNF timers are only valid for the epoch they were armed in;
  // a lower-layer failure bumps the epoch and so cancels them all.
  std::uint64_t epoch = 0;

  int working() const { return hw_up && vm_up ? up_instances : 0; }
};

/// One sample path. The observer is called with (duration, simulator) for
/// every constant-state interval inside [warmup, horizon].
class PathSimulator {
 public:
  PathSimulator(std::span<const NodeSpec> specs, const ChainConfig& chain, std::uint64_t seed)
      : specs_(specs), rng_(seed) {
    node_working_.assign(specs.size(), 0);
    for (size_t n = 0; n < chain.size(); ++n) {
      for (int k : chain[n].counts()) {
        Replica r;
        r.node = static_cast<int>(n);
        r.spec = &specs[n];
        r.instance_up.assign(k, 1);
        r.up_instances = k;
        replicas_.push_back(std::move(r));
        node_working_[n] += k;
      }
    }
    for (size_t n = 0; n < specs.size(); ++n) {
      if (node_working_[n] < specs[n].min_active_vnfs) ++nodes_down_;
    }
  }

  bool chain_up() const { return nodes_down_ == 0; }
  const Replica& replica(int i) const { return replicas_[i]; }
  std::uint64_t events() const { return events_; }

  template <typename Observer>
  void run(double horizon, double warmup, Observer&& observe) {
    for (int i = 0; i < static_cast<int>(replicas_.size()); ++i) {
      schedule(i, EventKind::kHwFail, replicas_[i].spec->hw.failure_rate());
      arm_upper_layers(i);
    }
    double now = 0;
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      const double next = std::min(ev.time, horizon);
      const double from = std::max(now, warmup);
      if (next > from) observe(next - from, *this);
      if (ev.time >= horizon) break;
      now = ev.time;
      queue_.pop();
      apply(ev);
    }
  }

 private:
  void schedule(int replica, EventKind kind, double rate, int instance = -1) {
    queue_.push(Event{now_ + rng_.exponential(rate), seq_++, replica, kind, instance,
                      replicas_[replica].epoch});
  }

  // Fresh VM and per-instance failure clocks after a restoration.
  void arm_upper_layers(int i) {
    const NodeSpec& spec = *replicas_[i].spec;
    schedule(i, EventKind::kVmFail, spec.vm.failure_rate());
    for (int j = 0; j < static_cast<int>(replicas_[i].instance_up.size()); ++j) {
      schedule(i, EventKind::kVnfFail, spec.vnf.failure_rate(), j);
    }
  }

  void set_working(int i, const std::function<void(Replica&)>& change) {
    Replica& r = replicas_[i];
    const int before = r.working();
    change(r);
    const int after = r.working();
    if (before == after) return;
    const int n = r.node;
    const int threshold = specs_[n].min_active_vnfs;
    const bool was_up = node_working_[n] >= threshold;
    node_working_[n] += after - before;
    const bool is_up = node_working_[n] >= threshold;
    if (was_up && !is_up) ++nodes_down_;
    if (!was_up && is_up) --nodes_down_;
  }

  void restore(Replica& r) {
    r.vm_up = true;
    std::fill(r.instance_up.begin(), r.instance_up.end(), 1);
    r.up_instances = static_cast<int>(r.instance_up.size());
  }

  void apply(const Event& ev) {
    now_ = ev.time;
    Replica& r = replicas_[ev.replica];
    const NodeSpec& spec = *r.spec;
    const bool upper = ev.kind != EventKind::kHwFail && ev.kind != EventKind::kHwRepair;
    if (upper && ev.epoch != r.epoch) return;
    ++events_;
    switch (ev.kind) {
      case EventKind::kHwFail:
        set_working(ev.replica, [](Replica& x) {
          x.hw_up = false;
          ++x.epoch;
        });
        schedule(ev.replica, EventKind::kHwRepair, spec.hw.repair_rate());
        break;
      case EventKind::kHwRepair:
        set_working(ev.replica, [this](Replica& x) {
          x.hw_up = true;
          restore(x);
          ++x.epoch;
        });
        schedule(ev.replica, EventKind::kHwFail, spec.hw.failure_rate());
        arm_upper_layers(ev.replica);
        break;
      case EventKind::kVmFail:
        set_working(ev.replica, [](Replica& x) {
          x.vm_up = false;
          ++x.epoch;
        });
        schedule(ev.replica, EventKind::kVmRepair, spec.vm.repair_rate());
        break;
      case EventKind::kVmRepair:
        set_working(ev.replica, [this](Replica& x) {
          restore(x);
          ++x.epoch;
        });
        arm_upper_layers(ev.replica);
        break;
      case EventKind::kVnfFail:
        set_working(ev.replica, [&](Replica& x) {
          x.instance_up[ev.instance] = 0;
          --x.up_instances;
        });
        schedule(ev.replica, EventKind::kVnfRepair, spec.vnf.repair_rate(), ev.instance);
        break;
      case EventKind::kVnfRepair:
        set_working(ev.replica, [&](Replica& x) {
          x.instance_up[ev.instance] = 1;
          ++x.up_instances;
        });
        schedule(ev.replica, EventKind::kVnfFail, spec.vnf.failure_rate(), ev.instance);
        break;
    }
  }

  std::span<const NodeSpec> specs_;
  Stream rng_;
  std::vector<Replica> replicas_;
  std::vector<int> node_working_;
  int nodes_down_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t events_ = 0;
  double now_ = 0;
};

void check_sim_config(const SimConfig& config) {
  std::vector<FieldError> errors;
  const double warmup = config.effective_warmup();
  if (!(config.horizon > 0) || !std::isfinite(config.horizon)) {
    errors.push_back({"horizon", "must be > 0"});
  }
  if (!(warmup >= 0)) errors.push_back({"warmup", "must be >= 0"});
  if (!(warmup < config.horizon)) errors.push_back({"warmup", "must be < horizon"});
  if (config.replications < 1) errors.push_back({"replications", "must be >= 1"});
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

void check_specs(std::span<const NodeSpec> specs) {
  std::vector<FieldError> errors;
  for (const NodeSpec& s : specs) {
    for (Layer l : {Layer::kHw, Layer::kVm, Layer::kVnf}) {
      const LayerParams& p = s.layer(l);
      if (!(p.mttf > 0 && p.mttr > 0)) {
        errors.push_back({fmt::format("{}.{}", s.name, layer_name(l)), "mttf and mttr must be > 0"});
      }
    }
    if (s.min_active_vnfs < 1) errors.push_back({s.name + ".min_active_vnfs", "must be >= 1"});
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

// Sample mean and standard error of the mean.
std::pair<double, double> mean_and_error(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t seed, int index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

SimEstimate simulate_chain(std::span<const NodeSpec> specs, const ChainConfig& chain,
                           const SimConfig& config) {
  check_sim_config(config);
  check_specs(specs);
  if (chain.size() != specs.size()) {
    throw ValidationError("chain", fmt::format("expected {} node configs, got {}", specs.size(),
                                               chain.size()));
  }
  const double warmup = config.effective_warmup();
  const double window = config.horizon - warmup;

  SimEstimate est;
  est.replications = config.replications;
  for (int rep = 0; rep < config.replications; ++rep) {
    PathSimulator path(specs, chain, replication_seed(config.seed, rep));
    double up = 0;
    path.run(config.horizon, warmup, [&](double dt, const PathSimulator& s) {
      if (s.chain_up()) up += dt;
    });
    if (path.events() == 0) est.too_short = true;
    est.samples.push_back(std::clamp(up / window, 0.0, 1.0));
  }
  std::tie(est.mean, est.std_error) = mean_and_error(est.samples);
  return est;
}

InstanceEstimate simulate_nr(const NodeSpec& spec, int k, const SimConfig& config) {
  check_sim_config(config);
  check_specs(std::span<const NodeSpec>(&spec, 1));
  if (k < 1) throw ValidationError("k", "a network replica needs at least one VNF instance");
  const double warmup = config.effective_warmup();
  const double window = config.horizon - warmup;
  const ChainConfig chain{NodeConfig({k})};

  std::vector<std::vector<double>> fractions(k + 1);
  InstanceEstimate est;
  est.replications = config.replications;
  for (int rep = 0; rep < config.replications; ++rep) {
    PathSimulator path(std::span<const NodeSpec>(&spec, 1), chain,
                       replication_seed(config.seed, rep));
    std::vector<double> time_at(k + 1, 0.0);
    path.run(config.horizon, warmup, [&](double dt, const PathSimulator& s) {
      time_at[s.replica(0).working()] += dt;
    });
    if (path.events() == 0) est.too_short = true;
    for (int v = 0; v <= k; ++v) fractions[v].push_back(time_at[v] / window);
  }
  for (int v = 0; v <= k; ++v) {
    auto [m, se] = mean_and_error(fractions[v]);
    est.mean.push_back(m);
    est.std_error.push_back(se);
  }
  return est;
}

}  // namespace hasfc
