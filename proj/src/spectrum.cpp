#include "ccd/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "ccd/error.hpp"

namespace ccd {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> row(const Eigen::MatrixXd& m, Eigen::Index i) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

}  // namespace

double uniform_step(std::span<const double> times) {
  if (times.size() < 2) throw ValidationError("spectrum: need at least two samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ValidationError("spectrum: time grid must increase");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt)
      throw ValidationError("spectrum: time grid is not uniform at index " + std::to_string(i));
  }
  return dt;
}

double bin_width(std::span<const double> times) {
  return 1.0 / (static_cast<double>(times.size()) * uniform_step(times));
}

std::vector<double> magnitude_spectrum(std::span<const double> samples, bool hann) {
  const std::size_t n = samples.size();
  if (n < 2) throw ValidationError("spectrum: need at least two samples");
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> in(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = hann ? 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n))
                          : 1.0;
    in[i] = (samples[i] - mean) * w;
  }
  const std::size_t bins = n / 2 + 1;
  std::vector<std::complex<double>> out(bins);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> mag(bins);
  for (std::size_t k = 0; k < bins; ++k) mag[k] = std::abs(out[k]);
  return mag;
}

double dominant_frequency(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw ValidationError("dominant_frequency: size mismatch");
  const double df = bin_width(times);
  const auto mag = magnitude_spectrum(values, true);
  std::size_t peak = 1;
  for (std::size_t k = 2; k < mag.size(); ++k) {
    if (mag[k] > mag[peak]) peak = k;
  }
  double offset = 0.0;
  if (peak + 1 < mag.size() && mag[peak] > 0.0) {
    const double floor = 1e-300;
    const double a = std::log(std::max(mag[peak - 1], floor));
    const double b = std::log(mag[peak]);
    const double c = std::log(std::max(mag[peak + 1], floor));
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return (static_cast<double>(peak) + offset) * df;
}

SpectrumGrid spectrum(const SweepGrid& grid) {
  const double dt = uniform_step(grid.y.values);
  const std::size_t n = grid.y.values.size();
  const std::size_t bins = n / 2 + 1;
  SpectrumGrid out;
  out.x = grid.x;
  out.meta = grid.meta;
  out.frequency = {"frequency", "Hz", {}};
  out.frequency.values.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    out.frequency.values[k] = static_cast<double>(k) / (static_cast<double>(n) * dt);
  out.values.resize(grid.values.rows(), static_cast<Eigen::Index>(bins));
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    const auto mag = magnitude_spectrum(row(grid.values, i), false);
    for (std::size_t k = 0; k < bins; ++k) out.values(i, static_cast<Eigen::Index>(k)) = mag[k];
  }
  return out;
}

}  // namespace ccd
