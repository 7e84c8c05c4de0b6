#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccd/drive.hpp"
#include "ccd/noise.hpp"
#include "ccd/propagator.hpp"
#include "ccd/rb.hpp"
#include "ccd/sequences.hpp"
#include "ccd/sweep.hpp"
#include "ccd/trajectory.hpp"

namespace ccd::io {

enum class Format { Csv, Json };

std::string_view to_string(Format f);

// Flat run description. Frequencies are kept in Hz exactly as written so the
// text form round-trips; drive() converts to rad/s.
struct RunConfig {
  Scheme scheme = Scheme::CMCCD;
  double mw_hz = 15e9;
  double detuning_hz = 0.0;
  double rabi_hz = 3.6e6;
  double rabi_error_hz = 0.0;
  // eps_m: mod_hz when set, else mod_ratio * rabi_hz (default 1/4).
  std::optional<double> mod_hz;
  double mod_ratio = 0.25;
  double mod_phase = kPi / 2.0;
  double mw_phase = 0.0;
  // Override the scheme's modulation ratios.
  std::optional<double> alpha_A;
  std::optional<double> alpha_P;

  // Error axis of chevron, rabi-error and infidelity runs, Hz.
  double error_start_hz = -8e6;
  double error_stop_hz = 8e6;
  int error_count = 81;
  ErrorAxis error_axis = ErrorAxis::Detuning;
  // Duration axis, s.
  double duration_start = 0.0;
  double duration_stop = 10e-6;
  int duration_count = 512;
  Readout readout = Readout::Auto;

  // Dressed sequences: t_c in s (ccd_rabi, ccd_ramsey) or phi_var in rad (two_axis).
  SequenceKind sequence = SequenceKind::CcdRabi;
  double sweep_start = 0.0;
  double sweep_stop = 5e-6;
  int sweep_count = 101;

  double total_angle = 20.0 * kPi;
  int samples_per_pi2 = 16;

  std::vector<int> rb_lengths{1, 2, 4, 8, 16, 32, 64};
  int rb_k = 15;
  RBMode rb_mode = RBMode::PulseLevel;

  // iq-export: a gate of iq_angle about phi_mw = mw_phase, sampled at iq_rate_hz.
  double iq_angle = kPi;
  double iq_rate_hz = 1e9;

  double noise_detuning_hz = 0.0;
  double noise_rabi_frac = 0.0;
  int noise_samples = 1;

  Method integrator = Method::CommutatorFree4;
  int steps_per_period = 200;

  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string output;
  Format format = Format::Csv;

  DriveConfig drive() const;
  NoiseSpec noise() const;
  RunOptions run_options() const;
  // Throws ValidationError naming the violated constraint.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

// `key = value` per line, `#` comments. Unknown keys, malformed values and
// violated constraints throw ConfigError carrying line and column.
RunConfig parse_config(std::string_view text);

// Applies one key to cfg; used for files and command-line overrides.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line = 0,
                   std::size_t column = 1);

// Every key, one per line, in a fixed order; parse_config reproduces cfg.
std::string emit_config(const RunConfig& cfg);

// "1,2,4,...,64": explicit values, with "..." continuing the arithmetic or
// geometric progression of the two preceding values up to the value after it.
std::vector<int> parse_int_list(std::string_view text);

}  // namespace ccd::io
