#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ccd/drive.hpp"

namespace ccd {

// Quasi-static Gaussian noise: one (delta, dOmega) draw per shot, constant
// within the shot.
struct NoiseSpec {
  double sigma_detuning = 0.0;   // rad/s
  double sigma_rabi_frac = 0.0;  // fraction of Omega0
  int samples = 1;
  std::uint64_t seed = 0;

  bool silent() const { return sigma_detuning == 0.0 && sigma_rabi_frac == 0.0; }
  void validate() const;
};

// cfg with the shot's detuning and Rabi error offsets added. The draw depends
// only on (seed, stream, shot).
DriveConfig noisy_config(const DriveConfig& cfg, const NoiseSpec& noise, std::uint64_t shot,
                         std::uint64_t stream = 0);

using Experiment = std::function<std::vector<double>(const DriveConfig&)>;

// Mean of experiment(noisy_config(cfg, noise, shot)) over the shots, summed in
// shot order. With both sigmas zero the experiment runs once on cfg.
std::vector<double> noise_average(const Experiment& experiment, const NoiseSpec& noise, const DriveConfig& cfg,
                                  unsigned threads = 0);

}  // namespace ccd
