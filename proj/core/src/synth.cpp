#include "osfs/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "osfs/rng.hpp"

namespace osfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string numbered(const char* prefix, int i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

// Low-information floor: small jittery baseline with rare spikes. Scales to
// a low-variance column, so rankers put it behind any real signal.
double noise_cell(std::mt19937_64& rng) {
  std::normal_distribution<double> jitter(0.0, 0.01);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v = 0.05 + jitter(rng);
  if (u(rng) < 0.001) {
    std::uniform_real_distribution<double> height(0.5, 1.0);
    v += height(rng);
  }
  return v;
}

// What an informative column turns into when its bank is inactive: busier
// than the noise floor (spikes often enough that a model reading it keeps
// seeing varied inputs) but carrying no target information.
double inactive_cell(std::mt19937_64& rng) {
  std::normal_distribution<double> jitter(0.0, 0.03);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double v = 0.05 + jitter(rng);
  if (u(rng) < 0.02) {
    std::uniform_real_distribution<double> height(0.2, 1.0);
    v += height(rng);
  }
  return v;
}

}  // namespace

SynthTrace synth_trace(const SynthSpec& spec) {
  if (spec.n_informative < 1 || spec.n_noise < 0 || spec.t_len < 1) {
    throw std::invalid_argument("synth_trace: need n_informative >= 1, n_noise >= 0, t_len >= 1");
  }
  if (spec.drift_at && (*spec.drift_at < 2 || *spec.drift_at > spec.t_len)) {
    throw std::invalid_argument("synth_trace: drift_at must lie within (1, t_len]");
  }

  const int m = spec.n_informative;
  const bool with_drift = spec.drift_at.has_value();
  const std::int64_t drift_at = with_drift ? *spec.drift_at : spec.t_len + 1;
  const auto t_len = static_cast<std::size_t>(spec.t_len);

  SynthTrace out;
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) {
    names.push_back(numbered("sig_", i));
    out.informative.push_back(names.back());
  }
  if (with_drift) {
    for (int i = 0; i < m; ++i) {
      names.push_back(numbered("alt_", i));
      out.post_drift_informative.push_back(names.back());
    }
  }
  for (int i = 0; i < spec.n_noise; ++i) names.push_back(numbered("noise_", i));

  // Per-bank sinusoid parameters. The latent variant shares one period and
  // phase inside a bank; the independent variant spreads periods so the
  // signals decorrelate.
  struct BankParams {
    std::vector<double> period, phase, meas_noise;
  };
  auto make_bank = [&](std::uint64_t stream) {
    std::mt19937_64 rng(derive_seed(spec.seed, stream));
    std::uniform_real_distribution<double> phase_of(0.0, kTwoPi);
    BankParams bank;
    if (spec.latent_copies) {
      const double phase = phase_of(rng);
      double ladder = 0.2 * spec.target_noise;
      for (int i = 0; i < m; ++i) {
        bank.period.push_back(250.0);
        bank.phase.push_back(phase);
        bank.meas_noise.push_back(ladder);
        ladder *= 1.6;
      }
    } else {
      for (int i = 0; i < m; ++i) {
        const double frac = m > 1 ? static_cast<double>(i) / (m - 1) : 0.0;
        bank.period.push_back(40.0 + 160.0 * frac);
        bank.phase.push_back(phase_of(rng));
        bank.meas_noise.push_back(0.3 * spec.target_noise);
      }
    }
    return bank;
  };
  const BankParams bank_a = make_bank(11);
  const BankParams bank_b = make_bank(12);

  auto latent = [&](const BankParams& bank, int i, std::int64_t t) {
    return std::sin(kTwoPi * static_cast<double>(t) / bank.period[i] + bank.phase[i]);
  };

  // column-major generation, one rng stream per column
  std::vector<std::vector<double>> columns(names.size());
  std::size_t col = 0;
  auto signal_column = [&](const BankParams& bank, int i, bool active_before_drift) {
    std::mt19937_64 rng(derive_seed(spec.seed, 100 + col));
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto& c = columns[col];
    c.reserve(t_len);
    for (std::int64_t t = 1; t <= spec.t_len; ++t) {
      const bool active = (t < drift_at) == active_before_drift;
      if (active) {
        c.push_back(0.5 + 0.45 * latent(bank, i, t) + bank.meas_noise[i] * gauss(rng));
      } else {
        c.push_back(inactive_cell(rng));
      }
    }
    ++col;
  };
  for (int i = 0; i < m; ++i) signal_column(bank_a, i, true);
  if (with_drift) {
    for (int i = 0; i < m; ++i) signal_column(bank_b, i, false);
  }
  for (int i = 0; i < spec.n_noise; ++i) {
    std::mt19937_64 rng(derive_seed(spec.seed, 100 + col));
    auto& c = columns[col];
    c.reserve(t_len);
    for (std::int64_t t = 1; t <= spec.t_len; ++t) c.push_back(noise_cell(rng));
    ++col;
  }

  // target from the noise-free latents of whichever bank is active
  std::mt19937_64 target_rng(derive_seed(spec.seed, 7));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> target;
  target.reserve(t_len);
  for (std::int64_t t = 1; t <= spec.t_len; ++t) {
    const BankParams& bank = t < drift_at || !with_drift ? bank_a : bank_b;
    double y = 2.0;
    if (spec.latent_copies) {
      y += latent(bank, 0, t);
    } else {
      double mix = 0.0;
      for (int i = 0; i < m; ++i) mix += latent(bank, i, t);
      y += 2.0 * mix / m;
    }
    y += spec.target_noise * gauss(target_rng);
    target.push_back(y);
  }

  TraceWindow window{FeatureCatalog(names)};
  for (std::int64_t t = 1; t <= spec.t_len; ++t) {
    Sample s;
    s.t = t;
    s.values.reserve(columns.size());
    for (const auto& c : columns) s.values.push_back(c[static_cast<std::size_t>(t - 1)]);
    s.target = target[static_cast<std::size_t>(t - 1)];
    window.append(s);
  }
  out.window = std::move(window);
  return out;
}

}  // namespace osfs
