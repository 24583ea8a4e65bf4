#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "osfs/types.hpp"

namespace osfs {

/// Generator recipe. The informative features are sinusoidal signals the
/// target is built from; the noise bank is a spiky low-information floor.
///
/// Two informative shapes:
///  - latent_copies = false: each informative feature is its own sinusoid
///    (distinct period and phase), the target mixes all of them equally.
///    Informative features are mutually near-uncorrelated.
///  - latent_copies = true: every informative feature is the same latent
///    sinusoid plus per-feature measurement noise on a strictly increasing
///    ladder, and the target depends on the latent alone. This makes the
///    clean copies strictly preferable and any informative subset
///    predictive.
///
/// Measurement-noise amplitudes scale with target_noise; with
/// target_noise == 0 the target is an exact function of the informative
/// columns.
///
/// With drift_at set, a second informative bank becomes active at that
/// sample (the target switches to it) while the first bank degrades into
/// noise — an informative-feature swap.
struct SynthSpec {
  int n_noise = 500;
  int n_informative = 8;
  std::int64_t t_len = 4000;
  double target_noise = 0.05;
  bool latent_copies = false;
  std::optional<std::int64_t> drift_at;
  std::uint64_t seed = 1;
};

struct SynthTrace {
  TraceWindow window;                              // fully labeled
  std::vector<std::string> informative;            // active before drift_at
  std::vector<std::string> post_drift_informative; // active from drift_at on (empty without drift)
};

/// Deterministic for a fixed spec (including seed).
SynthTrace synth_trace(const SynthSpec& spec);

}  // namespace osfs
