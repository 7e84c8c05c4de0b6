#include "ccd/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "ccd/error.hpp"
#include "ccd/parallel.hpp"
#include "ccd/propagator.hpp"

namespace ccd {

double nominal_rate(Scheme scheme, const DriveConfig& cfg) {
  return scheme == Scheme::Bare ? cfg.rabi : cfg.mod_strength;
}

std::vector<std::pair<double, double>> infidelity_curve(Scheme scheme, const DriveConfig& cfg, ErrorAxis axis,
                                                        const std::vector<double>& errors,
                                                        const RunOptions& opts) {
  const DriveConfig base = cfg.with_scheme(scheme);
  base.validate();
  const double rate = nominal_rate(scheme, base);
  if (!(rate > 0.0)) throw ValidationError("infidelity_curve: nominal rotation rate must be positive");
  const Frame frame = scheme == Scheme::Bare ? Frame::First : Frame::Second;
  const IntegratorSpec spec = opts.rotating();
  std::vector<std::pair<double, double>> out(errors.size());
  parallel_for(errors.size(), opts.threads, [&](std::size_t i) {
    DriveConfig c = base;
    if (axis == ErrorAxis::Detuning) c = c.with_detuning(errors[i]);
    else c.rabi_error = errors[i];
    const QubitState psi = evolve(make_hamiltonian(c, frame), QubitState::zero(), 0.0, kPi / rate, spec);
    out[i] = {errors[i], std::clamp(1.0 - psi.population_one(), 0.0, 1.0)};
  });
  return out;
}

TrajectoryRecord bloch_trajectory(Scheme scheme, const DriveConfig& cfg, double total_angle, int samples_per_pi2,
                                  const RunOptions& opts) {
  const DriveConfig base = cfg.with_scheme(scheme);
  base.validate();
  if (samples_per_pi2 < 1) throw ValidationError("bloch_trajectory: samples_per_pi2 must be >= 1");
  const double quarters = total_angle / (kPi / 2.0);
  const long n_markers = std::lround(quarters);
  if (n_markers < 1 || std::abs(quarters - static_cast<double>(n_markers)) > 1e-9 * std::max(1.0, quarters))
    throw ValidationError("bloch_trajectory: total angle must be a positive multiple of pi/2");
  const double rate = nominal_rate(scheme, base);
  if (!(rate > 0.0)) throw ValidationError("bloch_trajectory: nominal rotation rate must be positive");

  const double quarter_time = (kPi / 2.0) / rate;
  const std::size_t count = static_cast<std::size_t>(n_markers) * static_cast<std::size_t>(samples_per_pi2) + 1;
  std::vector<double> times(count);
  for (std::size_t j = 0; j < count; ++j)
    times[j] = quarter_time * static_cast<double>(j) / static_cast<double>(samples_per_pi2);

  const Frame frame = scheme == Scheme::Bare ? Frame::First : Frame::Second;
  const auto states = evolve_sampled(make_hamiltonian(base, frame), QubitState::zero(), 0.0, times, opts.rotating());

  TrajectoryRecord rec;
  rec.samples.reserve(count);
  for (std::size_t j = 0; j < count; ++j) rec.samples.push_back({times[j], bloch_vector(states[j])});
  for (long k = 1; k <= n_markers; ++k)
    rec.markers.push_back(rec.samples[static_cast<std::size_t>(k * samples_per_pi2)].bloch);

  for (std::size_t cls = 0; cls < 4; ++cls) {
    // marker k (1-based) sits at index k - 1; its class is k mod 4.
    for (std::size_t a = cls == 0 ? 3 : cls - 1; a < rec.markers.size(); a += 4)
      for (std::size_t b = a + 4; b < rec.markers.size(); b += 4)
        rec.spread = std::max(rec.spread, rec.markers[a].distance(rec.markers[b]));
  }
  return rec;
}

}  // namespace ccd
