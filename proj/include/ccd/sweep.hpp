#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccd/drive.hpp"
#include "ccd/propagator.hpp"

namespace ccd {

struct Axis {
  std::string name;
  std::string units;
  std::vector<double> values;
};

// How the spin-up fraction is read after the drive.
enum class Readout {
  Auto,     // Matched for CCD schemes, Raw for the bare qubit
  Raw,      // sigma_z population right after the pulse
  Matched,  // after an idle pad to the next Omega0 t = 0 mod 2pi, as in hardware readout
};

std::string_view to_string(Readout r);

// Execution knobs shared by the experiment drivers.
struct RunOptions {
  unsigned threads = 0;  // 0: CCD_SIM_THREADS or hardware concurrency
  std::optional<IntegratorSpec> integrator;

  IntegratorSpec rotating() const { return integrator.value_or(IntegratorSpec::rotating_default()); }
};

struct SweepMeta {
  DriveConfig cfg;
  Scheme scheme = Scheme::Bare;
  std::uint64_t seed = 0;
  Readout readout = Readout::Raw;
  // Fewer than 8 duration samples per oscillation period of interest.
  bool coarse_grid = false;
};

// values(i, j): spin-up fraction at x.values[i], y.values[j].
struct SweepGrid {
  Axis x;
  Axis y;
  Eigen::MatrixXd values;
  SweepMeta meta;
};

// Spin-up fraction after driving |0> for each duration (y axis) at each
// detuning (x axis, rad/s). Integrated in the first rotating frame.
SweepGrid chevron_sweep(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& detunings,
                        const std::vector<double>& durations, Readout readout = Readout::Auto,
                        const RunOptions& opts = {});

// As chevron_sweep with the Rabi error (rad/s) on the x axis.
SweepGrid rabi_error_sweep(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& rabi_errors,
                           const std::vector<double>& durations, Readout readout = Readout::Auto,
                           const RunOptions& opts = {});

// A single row: spin-up fraction after driving |0> for each of the ascending
// durations under `cfg` as given (its own detuning and Rabi error).
std::vector<double> rabi_trace(Scheme scheme, const DriveConfig& cfg, const std::vector<double>& durations,
                               Readout readout = Readout::Auto, const RunOptions& opts = {});

// n points from start to stop inclusive.
std::vector<double> linspace(double start, double stop, std::size_t n);

}  // namespace ccd
