#include "ccd/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "ccd/error.hpp"
#include "ccd/parallel.hpp"
#include "ccd/pulse.hpp"

namespace ccd {

namespace {

void require_ascending(const std::vector<double>& v, const char* what, bool non_negative) {
  if (v.empty()) throw ValidationError(std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw ValidationError(std::string(what) + " grid has a non-finite value");
    if (non_negative && v[i] < 0.0) throw ValidationError(std::string(what) + " grid has a negative value");
    if (i > 0 && !(v[i] > v[i - 1])) throw ValidationError(std::string(what) + " grid is not increasing");
  }
}

Readout resolve(Readout r, Scheme scheme) {
  if (r != Readout::Auto) return r;
  return scheme == Scheme::Bare ? Readout::Raw : Readout::Matched;
}

std::vector<double> sweep_row(const DriveConfig& cfg, const std::vector<double>& durations, Readout readout,
                              const IntegratorSpec& spec) {
  const auto states = evolve_sampled(make_hamiltonian(cfg, Frame::First), QubitState::zero(), 0.0,
                                     durations, spec);
  std::vector<double> row(durations.size());
  DriveConfig idle = cfg;
  idle.mod_phase = 0.0;
  const auto idle_h = make_hamiltonian(idle, Frame::First);
  for (std::size_t j = 0; j < durations.size(); ++j) {
    QubitState psi = states[j];
    if (readout == Readout::Matched) {
      const double pad = readout_pad(durations[j], cfg).duration;
      psi = evolve(idle_h, psi, durations[j], durations[j] + pad, spec);
    }
    row[j] = std::clamp(psi.population_one(), 0.0, 1.0);
  }
  return row;
}

bool coarse(const std::vector<double>& durations, double oscillation) {
  if (durations.size() < 2 || oscillation <= 0.0) return false;
  const double dt = (durations.back() - durations.front()) / static_cast<double>(durations.size() - 1);
  return (kTwoPi / oscillation) / dt < 8.0;
}

SweepGrid run_sweep(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& xs,
                    const std::vector<double>& durations, Readout readout, const RunOptions& opts,
                    bool vary_detuning) {
  require_ascending(xs, vary_detuning ? "detuning" : "rabi error", false);
  require_ascending(durations, "duration", true);
  const DriveConfig base = cfg.with_scheme(scheme);
  base.validate();
  const Readout mode = resolve(readout, scheme);
  const IntegratorSpec spec = opts.rotating();

  SweepGrid grid;
  grid.x = vary_detuning ? Axis{"detuning", "rad/s", xs} : Axis{"rabi_error", "rad/s", xs};
  grid.y = Axis{"duration", "s", durations};
  grid.values.resize(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(durations.size()));
  grid.meta = {base, scheme, 0, mode, false};

  std::vector<std::vector<double>> rows(xs.size());
  parallel_for(xs.size(), opts.threads, [&](std::size_t i) {
    DriveConfig c = base;
    if (vary_detuning) c = c.with_detuning(xs[i]);
    else c.rabi_error = xs[i];
    rows[i] = sweep_row(c, durations, mode, spec);
  });
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < durations.size(); ++j)
      grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];

  double oscillation = base.mod_strength;
  if (scheme == Scheme::Bare) {
    const double worst = std::max(std::abs(xs.front()), std::abs(xs.back()));
    oscillation = vary_detuning ? std::hypot(base.rabi + base.rabi_error, worst) : base.rabi + worst;
  }
  grid.meta.coarse_grid = coarse(durations, oscillation);
  return grid;
}

}  // namespace

std::string_view to_string(Readout r) {
  switch (r) {
    case Readout::Auto: return "auto";
    case Readout::Raw: return "raw";
    case Readout::Matched: return "matched";
  }
  return "?";
}

SweepGrid chevron_sweep(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& detunings,
                        const std::vector<double>& durations, Readout readout, const RunOptions& opts) {
  return run_sweep(scheme, cfg, detunings, durations, readout, opts, true);
}

SweepGrid rabi_error_sweep(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& rabi_errors,
                           const std::vector<double>& durations, Readout readout, const RunOptions& opts) {
  return run_sweep(scheme, cfg, rabi_errors, durations, readout, opts, false);
}

std::vector<double> rabi_trace(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& durations,
                               Readout readout, const RunOptions& opts) {
  require_ascending(durations, "duration", true);
  const DriveConfig base = cfg.with_scheme(scheme);
  base.validate();
  return sweep_row(base, durations, resolve(readout, scheme), opts.rotating());
}

std::vector<double> linspace(double start, double stop, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = start;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace ccd
