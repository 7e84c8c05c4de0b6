#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccd/clifford.hpp"
#include "ccd/drive.hpp"
#include "ccd/noise.hpp"
#include "ccd/sweep.hpp"

namespace ccd {

enum class RBMode {
  PulseLevel,     // compiled pulse programs integrated with the drive model
  IdealMatrices,  // ideal Clifford matrices, no dynamics
};

struct RBOptions {
  std::vector<int> lengths{1, 2, 4, 8, 16, 32, 64};
  int randomizations = 15;  // K
  std::uint64_t seed = 0;
  RBMode mode = RBMode::PulseLevel;
  // Quasi-static noise; each sequence averages noise.samples shots.
  NoiseSpec noise;
  RunOptions run;
};

struct RBResult {
  std::vector<int> lengths;
  std::vector<double> signal;         // mean over the K sequences
  std::vector<double> signal_stderr;  // standard error of that mean
  std::vector<std::vector<double>> sequence_signals;  // [length][k]
  int randomizations = 0;
  double amplitude = 0.0;
  double decay = 0.0;  // 2 F_c - 1
  double clifford_fidelity = 0.0;
  double gate_fidelity = 0.0;  // 1 - (1 - F_c) / 1.875
  double fit_residual = 0.0;
  bool converged = false;
  // Signal at the largest length below 3 standard errors.
  bool depth_warning = false;
  std::string message;
};

// The M Clifford indices of randomization k; depends only on (seed, M, k).
std::vector<int> draw_cliffords(std::uint64_t seed, int length, int k);

// P_up after the Up recovery minus P_up after the Down recovery for one
// Clifford sequence. CCD schemes need eps_m = Omega0 / (4k).
double rb_sequence_signal(const DriveConfig& cfg, std::span<const int> sequence, RBMode mode,
                          const IntegratorSpec& spec);

// Fits A p^M to the mean signals. F_c = (1 + p) / 2, clamped to [0, 1].
RBResult randomized_benchmarking(Scheme scheme, const DriveConfig& cfg, const RBOptions& options);

// Fit of A p^M alone: log-linear regression on the positive points, then
// Gauss-Newton on the full data. Fills amplitude, decay, fidelities, residual.
void fit_rb_decay(RBResult& result);

// Each value divided by the largest; the normalization of fidelity-versus-error sweeps.
std::vector<double> normalized_fidelity(const std::vector<double>& fidelities);

}  // namespace ccd
