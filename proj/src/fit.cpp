#include "ccd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ccd/qubit.hpp"
#include "ccd/spectrum.hpp"

namespace ccd {

namespace {

constexpr int kMaxIterations = 500;

// Parameters in span-normalized time u = (t - t0) / span:
// A, cycles per span, decay rate per span, phase, offset.
using Params = Eigen::Matrix<double, 5, 1>;

double model(const Params& p, double u) {
  return p(0) * std::exp(-p(2) * u) * std::sin(kTwoPi * p(1) * u + p(3)) + p(4);
}

double cost(const Params& p, const std::vector<double>& u, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = y[i] - model(p, u[i]);
    s += r * r;
  }
  return s;
}

// Initial frequency in cycles per span from the spectrum of a uniform
// resampling of the record.
double guess_cycles(const std::vector<double>& u, std::span<const double> y) {
  const std::size_t n = std::max<std::size_t>(u.size(), 64);
  std::vector<double> grid(n), vals(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    while (k + 2 < u.size() && u[k + 1] < x) ++k;
    const double w = (u[k + 1] == u[k]) ? 0.0 : (x - u[k]) / (u[k + 1] - u[k]);
    grid[i] = x;
    vals[i] = y[k] + std::clamp(w, 0.0, 1.0) * (y[k + 1] - y[k]);
  }
  return dominant_frequency(grid, vals);
}

// Envelope decay rate per span from the log of windowed RMS amplitudes.
double guess_decay(const std::vector<double>& u, std::span<const double> y, double offset) {
  constexpr int kWindows = 4;
  std::vector<double> mid, logamp;
  for (int w = 0; w < kWindows; ++w) {
    const double lo = static_cast<double>(w) / kWindows, hi = static_cast<double>(w + 1) / kWindows;
    double s = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] >= lo && (u[i] < hi || (w == kWindows - 1 && u[i] <= hi))) {
        s += (y[i] - offset) * (y[i] - offset);
        ++count;
      }
    }
    if (count > 1 && s > 0.0) {
      mid.push_back(0.5 * (lo + hi));
      logamp.push_back(0.5 * std::log(s / count));
    }
  }
  if (mid.size() < 2) return 0.0;
  const double mx = std::accumulate(mid.begin(), mid.end(), 0.0) / static_cast<double>(mid.size());
  const double my = std::accumulate(logamp.begin(), logamp.end(), 0.0) / static_cast<double>(mid.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    sxy += (mid[i] - mx) * (logamp[i] - my);
    sxx += (mid[i] - mx) * (mid[i] - mx);
  }
  return std::max(0.0, -sxy / sxx);
}

// Linear least squares for amplitude and phase at fixed frequency and decay.
void guess_amplitude_phase(Params& p, const std::vector<double>& u, std::span<const double> y) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(u.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double env = std::exp(-p(2) * u[i]);
    const double arg = kTwoPi * p(1) * u[i];
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = env * std::sin(arg);
    a(r, 1) = env * std::cos(arg);
    a(r, 2) = 1.0;
    b(r) = y[i];
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
  p(0) = std::hypot(x(0), x(1));
  p(3) = std::atan2(x(1), x(0));
  p(4) = x(2);
}

}  // namespace

FitResult fit_decaying_sinusoid(std::span<const double> times, std::span<const double> values,
                                std::optional<double> pi_time) {
  FitResult out;
  out.t2 = std::numeric_limits<double>::quiet_NaN();
  if (times.size() != values.size()) {
    out.message = "times and values differ in length";
    return out;
  }
  if (times.size() < 16) {
    out.message = "need at least 16 points";
    return out;
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      out.message = "times must increase";
      return out;
    }
  }
  const double t0 = times.front();
  const double span = times.back() - times.front();
  std::vector<double> u(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) u[i] = (times[i] - t0) / span;

  Params p;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  p(1) = guess_cycles(u, values);
  if (p(1) < 2.0 * (1.0 - 1e-6)) {
    out.message = "record spans fewer than 2 oscillation periods";
    return out;
  }
  p(2) = guess_decay(u, values, mean);
  guess_amplitude_phase(p, u, values);

  // Levenberg-Marquardt with analytic Jacobian.
  const auto n = static_cast<Eigen::Index>(u.size());
  double lambda = 1e-3;
  double current = cost(p, u, values);
  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    Eigen::MatrixXd jac(n, 5);
    Eigen::VectorXd res(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = u[static_cast<std::size_t>(i)];
      const double env = std::exp(-p(2) * x);
      const double arg = kTwoPi * p(1) * x + p(3);
      const double s = std::sin(arg), c = std::cos(arg);
      jac(i, 0) = env * s;
      jac(i, 1) = p(0) * env * c * kTwoPi * x;
      jac(i, 2) = -x * p(0) * env * s;
      jac(i, 3) = p(0) * env * c;
      jac(i, 4) = 1.0;
      res(i) = values[static_cast<std::size_t>(i)] - model(p, x);
    }
    const Eigen::Matrix<double, 5, 5> jtj = jac.transpose() * jac;
    const Params jtr = jac.transpose() * res;
    bool improved = false;
    for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
      Eigen::Matrix<double, 5, 5> damped = jtj;
      for (int d = 0; d < 5; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
      const Params step = damped.ldlt().solve(jtr);
      const Params trial = p + step;
      const double c = cost(trial, u, values);
      if (std::isfinite(c) && c <= current) {
        const double drop = current - c;
        const double step_size = step.cwiseAbs().maxCoeff();
        p = trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (drop <= 1e-14 * std::max(current, 1e-300) || step_size < 1e-13 || c < 1e-28) converged = true;
        current = c;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) {
      // No downhill step at any damping: at a minimum to working precision.
      converged = lambda > 1e6;
      break;
    }
    if (converged) break;
  }

  out.iterations = it + 1;
  out.converged = converged;
  out.residual_rms = std::sqrt(current / static_cast<double>(n));
  if (!converged) {
    out.message = "no convergence after " + std::to_string(out.iterations) + " iterations";
    return out;
  }
  // Canonical sign: positive amplitude and frequency.
  if (p(1) < 0.0) {
    p(1) = -p(1);
    p(3) = -p(3) + kPi;
  }
  if (p(0) < 0.0) {
    p(0) = -p(0);
    p(3) += kPi;
  }
  out.amplitude = p(0);
  out.frequency = p(1) / span;
  out.phase = std::remainder(p(3) - kTwoPi * out.frequency * t0, kTwoPi);
  out.offset = p(4);
  const double rate = p(2) / span;
  if (p(2) <= 1.0 / kT2SpanCap) {
    out.t2 = std::numeric_limits<double>::infinity();
    out.t2_unbounded = true;
    out.message = "decay not resolved within the record";
  } else {
    out.t2 = 1.0 / rate;
  }
  // The decay was fitted relative to the first sample; shift the amplitude to t = 0.
  out.amplitude *= std::exp(rate > 0.0 && !out.t2_unbounded ? t0 * rate : 0.0);
  if (pi_time && *pi_time > 0.0) out.quality_factor = out.t2 / *pi_time;
  return out;
}

}  // namespace ccd
