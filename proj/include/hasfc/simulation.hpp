#pragma once

/// @file simulation.hpp
/// Discrete-event Monte Carlo simulation of a chain under the same
/// failure / repair / inhibition / restoration dynamics as the analytic
/// replica model. Used as an independent check on the Markov engine.
///
/// Randomness: every replication owns a std::mt19937_64 stream seeded with
/// SplitMix64(seed, replication index). Exponential variates are drawn by
/// inversion from 53-bit uniforms, so results do not depend on the standard
/// library's distribution implementations.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hasfc/domain.hpp"

namespace hasfc {

struct SimConfig {
  double horizon = 1e6;             // simulated hours per replication
  std::optional<double> warmup;     // defaults to horizon / 10
  std::uint64_t seed = 1;
  int replications = 30;

  double effective_warmup() const { return warmup.value_or(horizon / 10); }
};

struct SimEstimate {
  double mean = 0;
  double std_error = 0;             // across replications
  int replications = 0;
  /// Set when some replication saw no event before the horizon.
  bool too_short = false;
  std::vector<double> samples;      // one availability per replication
};

/// Per-instance-count time fractions of a single replica.
struct InstanceEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;
  int replications = 0;
  bool too_short = false;
};

/// Derives the seed of replication `index` from the master seed.
std::uint64_t replication_seed(std::uint64_t seed, int index);

/// Throws ValidationError on a bad config or mismatched chain.
SimEstimate simulate_chain(std::span<const NodeSpec> specs, const ChainConfig& chain,
                           const SimConfig& config);

InstanceEstimate simulate_nr(const NodeSpec& spec, int k, const SimConfig& config);

}  // namespace hasfc
