#pragma once

#include <optional>
#include <span>
#include <string>

namespace ccd {

// Least-squares fit of A exp(-t/T2) sin(2 pi f t + phase) + offset.
struct FitResult {
  double amplitude = 0.0;
  double frequency = 0.0;  // Hz
  double t2 = 0.0;         // s; +inf when no decay is resolved, NaN when the fit failed
  double phase = 0.0;
  double offset = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  // Decay time beyond kT2SpanCap times the record length: T2 is a lower bound at best.
  bool t2_unbounded = false;
  int iterations = 0;
  // T2 / T_pi when a pi time was supplied.
  std::optional<double> quality_factor;
  std::string message;
};

inline constexpr double kT2SpanCap = 1e3;

// Needs >= 16 points spanning >= 2 periods; otherwise returns a failed result
// with the reason in `message`.
FitResult fit_decaying_sinusoid(std::span<const double> times, std::span<const double> values,
                                std::optional<double> pi_time = std::nullopt);

}  // namespace ccd
