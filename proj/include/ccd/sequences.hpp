#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "ccd/drive.hpp"
#include "ccd/pulse.hpp"
#include "ccd/sweep.hpp"

namespace ccd {

enum class SequenceKind {
  CcdRabi,    // one gate of duration t_c, then the readout pad
  CcdRamsey,  // pi/2, idle t_c, pi/2, readout pad
  TwoAxis,    // pi/2 at phi_mw = 0, pi/2 at phi_mw = phi_var, readout pad
};

std::string_view to_string(SequenceKind kind);
SequenceKind parse_sequence_kind(std::string_view name);

// The pulse program for one sweep value (t_c in s, or phi_var in rad).
PulseProgram dressed_program(SequenceKind kind, const DriveConfig& cfg, double value);

// Spin-up fraction at readout for each sweep value. Requires a CCD scheme;
// compile errors propagate.
std::vector<std::pair<double, double>> dressed_sequence_experiment(SequenceKind kind, const DriveConfig& cfg,
                                                                   const std::vector<double>& values,
                                                                   const RunOptions& opts = {});

}  // namespace ccd
