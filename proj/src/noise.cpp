#include "ccd/noise.hpp"

#include <cmath>

#include "ccd/error.hpp"
#include "ccd/parallel.hpp"
#include "ccd/random.hpp"

namespace ccd {

void NoiseSpec::validate() const {
  if (!(sigma_detuning >= 0.0) || !std::isfinite(sigma_detuning))
    throw ValidationError("noise: sigma_detuning must be finite and >= 0");
  if (!(sigma_rabi_frac >= 0.0) || !std::isfinite(sigma_rabi_frac))
    throw ValidationError("noise: sigma_rabi_frac must be finite and >= 0");
  if (samples < 1) throw ValidationError("noise: samples must be >= 1");
}

DriveConfig noisy_config(const DriveConfig& cfg, const NoiseSpec& noise, std::uint64_t shot,
                         std::uint64_t stream) {
  KeyedStream rng(noise.seed, {stream, shot});
  const double n_delta = rng.normal();
  const double n_rabi = rng.normal();
  DriveConfig c = cfg.with_detuning(cfg.detuning() + noise.sigma_detuning * n_delta);
  c.rabi_error += noise.sigma_rabi_frac * cfg.rabi * n_rabi;
  return c;
}

std::vector<double> noise_average(const Experiment& experiment, const NoiseSpec& noise, const DriveConfig& cfg,
                                  unsigned threads) {
  noise.validate();
  if (noise.silent()) return experiment(cfg);
  const auto shots = static_cast<std::size_t>(noise.samples);
  std::vector<std::vector<double>> results(shots);
  parallel_for(shots, threads, [&](std::size_t s) { results[s] = experiment(noisy_config(cfg, noise, s)); });
  std::vector<double> mean(results.front().size(), 0.0);
  for (const auto& r : results) {
    if (r.size() != mean.size()) throw Error("noise_average: experiment returned inconsistent lengths");
    for (std::size_t i = 0; i < r.size(); ++i) mean[i] += r[i];
  }
  for (double& v : mean) v /= static_cast<double>(shots);
  return mean;
}

}  // namespace ccd
