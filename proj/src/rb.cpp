#include "ccd/rb.hpp"

#include <algorithm>
#include <cmath>

#include "ccd/error.hpp"
#include "ccd/parallel.hpp"
#include "ccd/pulse.hpp"
#include "ccd/random.hpp"

namespace ccd {

namespace {

double recovery_population(const DriveConfig& cfg, const QubitState& psi, double start, int recovery,
                           const IntegratorSpec& spec) {
  PulseProgram tail(cfg, start);
  tail.add_clifford(recovery).pad();
  return simulate(compile(tail), Frame::Second, spec, psi).population_one();
}

}  // namespace

std::vector<int> draw_cliffords(std::uint64_t seed, int length, int k) {
  KeyedStream rng(seed, {static_cast<std::uint64_t>(length), static_cast<std::uint64_t>(k)});
  std::vector<int> seq(static_cast<std::size_t>(length));
  for (int& c : seq) c = static_cast<int>(rng.below(kCliffordCount));
  return seq;
}

double rb_sequence_signal(const DriveConfig& cfg, std::span<const int> sequence, RBMode mode,
                          const IntegratorSpec& spec) {
  const int up = recovery_clifford(sequence, RecoveryTarget::Up).index;
  const int down = recovery_clifford(sequence, RecoveryTarget::Down).index;
  if (mode == RBMode::IdealMatrices) {
    const UnitaryOp p = sequence_matrix(sequence);
    const auto up_state = clifford(up).matrix * (p * QubitState::zero());
    const auto down_state = clifford(down).matrix * (p * QubitState::zero());
    return up_state.population_one() - down_state.population_one();
  }
  if (!cfg.is_bare() && !has_frame_matched_modulation(cfg))
    throw ValidationError("rb: CCD schemes need eps_m = Omega0 / (4k) so gates end on modulation periods");
  PulseProgram prefix(cfg);
  for (int c : sequence) prefix.add_clifford(c);
  const QubitState psi = simulate(compile(prefix), Frame::Second, spec);
  const double start = prefix.total_duration();
  return recovery_population(cfg, psi, start, up, spec) - recovery_population(cfg, psi, start, down, spec);
}

void fit_rb_decay(RBResult& r) {
  const std::size_t n = r.lengths.size();
  r.converged = false;
  if (n < 2) {
    r.message = "need at least two sequence lengths to fit";
    return;
  }
  // Log-linear start from the positive points.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.signal[i] > 0.0) {
      xs.push_back(r.lengths[i]);
      ys.push_back(std::log(r.signal[i]));
    }
  }
  if (xs.size() < 2) {
    r.message = "fewer than two positive signal points; no decay fit";
    return;
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) {
    r.message = "sequence lengths must differ";
    return;
  }
  double slope = sxy / sxx;
  double a = std::exp(my - slope * mx);
  double p = std::exp(slope);

  auto sse = [&](double amp, double dec) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = r.signal[i] - amp * std::pow(dec, r.lengths[i]);
      s += e * e;
    }
    return s;
  };
  // Gauss-Newton refinement with step halving.
  double current = sse(a, p);
  for (int it = 0; it < 100; ++it) {
    double j11 = 0.0, j12 = 0.0, j22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = r.lengths[i];
      const double pm = std::pow(p, m);
      const double da = pm;
      const double dp = a * m * std::pow(p, m - 1.0);
      const double e = r.signal[i] - a * pm;
      j11 += da * da;
      j12 += da * dp;
      j22 += dp * dp;
      g1 += da * e;
      g2 += dp * e;
    }
    const double det = j11 * j22 - j12 * j12;
    if (!(std::abs(det) > 0.0)) break;
    double step_a = (j22 * g1 - j12 * g2) / det;
    double step_p = (j11 * g2 - j12 * g1) / det;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const double c = sse(a + step_a, p + step_p);
      if (std::isfinite(c) && c <= current) {
        a += step_a;
        p += step_p;
        const double drop = current - c;
        current = c;
        accepted = drop > 1e-15 * std::max(current, 1e-300);
        break;
      }
      step_a *= 0.5;
      step_p *= 0.5;
    }
    if (!accepted) break;
  }
  r.amplitude = a;
  r.decay = p;
  r.fit_residual = std::sqrt(current / static_cast<double>(n));
  r.converged = std::isfinite(a) && std::isfinite(p);
  if (!r.converged) {
    r.message = "decay fit diverged";
    return;
  }
  const double fc = (1.0 + p) / 2.0;
  if (fc > 1.0 || fc < 0.0) r.message = "F_c clamped to [0, 1] from " + std::to_string(fc);
  r.clifford_fidelity = std::clamp(fc, 0.0, 1.0);
  r.gate_fidelity = 1.0 - (1.0 - r.clifford_fidelity) / kPrimitivesPerClifford;
}

RBResult randomized_benchmarking(Scheme scheme, const DriveConfig& cfg, const RBOptions& options) {
  const DriveConfig base = cfg.with_scheme(scheme);
  base.validate();
  options.noise.validate();
  if (options.lengths.empty()) throw ValidationError("rb: no sequence lengths");
  for (std::size_t i = 0; i < options.lengths.size(); ++i) {
    if (options.lengths[i] < 1) throw ValidationError("rb: sequence lengths must be >= 1");
    if (i > 0 && options.lengths[i] <= options.lengths[i - 1])
      throw ValidationError("rb: sequence lengths must be ascending");
  }
  if (options.randomizations < 1) throw ValidationError("rb: K must be >= 1");
  if (options.mode == RBMode::PulseLevel && !base.is_bare() && !has_frame_matched_modulation(base))
    throw ValidationError("rb: CCD schemes need eps_m = Omega0 / (4k) so gates end on modulation periods");

  const std::size_t n_len = options.lengths.size();
  const auto k_count = static_cast<std::size_t>(options.randomizations);
  const IntegratorSpec spec = options.run.rotating();
  const bool noisy = !options.noise.silent() && options.mode == RBMode::PulseLevel;

  std::vector<double> flat(n_len * k_count);
  parallel_for(flat.size(), options.run.threads, [&](std::size_t job) {
    const int m = options.lengths[job / k_count];
    const int k = static_cast<int>(job % k_count);
    const auto seq = draw_cliffords(options.seed, m, k);
    if (!noisy) {
      flat[job] = rb_sequence_signal(base, seq, options.mode, spec);
      return;
    }
    const std::uint64_t stream = (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(k);
    double sum = 0.0;
    for (int s = 0; s < options.noise.samples; ++s)
      sum += rb_sequence_signal(noisy_config(base, options.noise, static_cast<std::uint64_t>(s), stream), seq,
                                options.mode, spec);
    flat[job] = sum / options.noise.samples;
  });

  RBResult r;
  r.lengths = options.lengths;
  r.randomizations = options.randomizations;
  for (std::size_t i = 0; i < n_len; ++i) {
    std::vector<double> row(flat.begin() + static_cast<std::ptrdiff_t>(i * k_count),
                            flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * k_count));
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(k_count);
    double var = 0.0;
    for (double v : row) var += (v - mean) * (v - mean);
    const double se = k_count > 1 ? std::sqrt(var / static_cast<double>(k_count - 1) / static_cast<double>(k_count))
                                  : 0.0;
    r.signal.push_back(mean);
    r.signal_stderr.push_back(se);
    r.sequence_signals.push_back(std::move(row));
  }
  r.depth_warning = k_count > 1 && std::abs(r.signal.back()) < 3.0 * r.signal_stderr.back();
  fit_rb_decay(r);
  return r;
}

std::vector<double> normalized_fidelity(const std::vector<double>& fidelities) {
  if (fidelities.empty()) return {};
  const double top = *std::max_element(fidelities.begin(), fidelities.end());
  std::vector<double> out(fidelities.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = top > 0.0 ? fidelities[i] / top : 0.0;
  return out;
}

}  // namespace ccd
