#pragma once

#include <span>
#include <vector>

#include "ccd/sweep.hpp"

namespace ccd {

// values(i, k): DFT magnitude of row i of the source grid (mean removed) at
// frequency.values[k], k = 0 .. N/2, spanning [0, f_s / 2] in Hz.
struct SpectrumGrid {
  Axis x;
  Axis frequency;
  Eigen::MatrixXd values;
  SweepMeta meta;
};

// Throws ValidationError if the duration axis is not uniform.
SpectrumGrid spectrum(const SweepGrid& grid);

// |DFT| of the mean-removed samples, optionally Hann-windowed; N/2 + 1 bins.
std::vector<double> magnitude_spectrum(std::span<const double> samples, bool hann = false);

// Sampling interval of a uniform grid; throws ValidationError otherwise.
double uniform_step(std::span<const double> times);

// Frequency resolution 1 / (N dt) of a uniform grid, Hz.
double bin_width(std::span<const double> times);

// Peak of the Hann-windowed, mean-removed spectrum (DC excluded), refined by a
// parabola through the log magnitudes of the peak bin and its neighbours. Ties
// go to the lower frequency. Returns Hz.
double dominant_frequency(std::span<const double> times, std::span<const double> values);

}  // namespace ccd
