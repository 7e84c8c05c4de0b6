#pragma once

#include <utility>
#include <vector>

#include "ccd/drive.hpp"
#include "ccd/qubit.hpp"
#include "ccd/sweep.hpp"

namespace ccd {

enum class ErrorAxis { Detuning, Rabi };

// Y_pi state infidelity 1 - |<1|U|0>|^2 at each error value (rad/s). CCD
// schemes integrate the second-frame Hamiltonian for pi/eps_m, the bare qubit
// the first-frame Hamiltonian for pi/Omega0.
std::vector<std::pair<double, double>> infidelity_curve(Scheme scheme, const DriveConfig& cfg, ErrorAxis axis,
                                                        const std::vector<double>& errors,
                                                        const RunOptions& opts = {});

// Nominal rotation rate: eps_m for CCD schemes, Omega0 for the bare qubit.
double nominal_rate(Scheme scheme, const DriveConfig& cfg);

struct TrajectorySample {
  double t = 0.0;
  BlochVector bloch;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  // Bloch vectors after each pi/2 of nominal rotation, k = 1 .. total/(pi/2).
  std::vector<BlochVector> markers;
  // Max over nominal states (k mod 4) of the largest pairwise marker distance.
  double spread = 0.0;
};

// Trajectory of |0> in the second frame (CCD) or first frame (bare). Throws
// ValidationError unless total_angle is a positive multiple of pi/2.
TrajectoryRecord bloch_trajectory(Scheme scheme, const DriveConfig& cfg, double total_angle, int samples_per_pi2,
                                  const RunOptions& opts = {});

}  // namespace ccd
