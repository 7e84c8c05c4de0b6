#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ccd/clifford.hpp"
#include "ccd/drive.hpp"
#include "ccd/propagator.hpp"

namespace ccd {

enum class SegmentKind { Gate, Idle, ReadoutPad };

std::string_view to_string(SegmentKind kind);

// One time slice of a sequence. theta_m is pi/2 for gates and 0 otherwise.
struct PulseSegment {
  SegmentKind kind = SegmentKind::Gate;
  double duration = 0.0;  // s
  double theta_m = kPi / 2.0;
  double phi_mw = 0.0;
  std::string label;
};

// Rotation by `angle` about the x-y axis at phi_mw + pi/2 in the second frame.
// Duration angle / eps_m. Throws ValidationError for eps_m == 0, a bare config
// or angle <= 0.
PulseSegment gate_pulse(double angle, double phi_mw, const DriveConfig& cfg);

// Plain Rabi pulse of the bare qubit: rotation by `angle` about sigma_{phi_mw},
// duration angle / Omega0.
PulseSegment rabi_pulse(double angle, double phi_mw, const DriveConfig& cfg);

// theta_m = 0: a z rotation at rate eps_m in the second frame.
PulseSegment idle_pulse(double duration, const DriveConfig& cfg);

// Idle of the smallest duration d >= 0 with Omega0 (elapsed + d) = 0 mod 2pi.
PulseSegment readout_pad(double elapsed, const DriveConfig& cfg);

// Segments realizing one primitive with the scheme of `cfg`. X is generated at
// phi_mw = -pi/2 and Y at phi_mw = 0 for CCD schemes, at 0 and pi/2 for the
// bare qubit. I yields a single zero-duration gate.
std::vector<PulseSegment> primitive_pulses(Primitive p, const DriveConfig& cfg);

// True when eps_m = Omega0 / (4k) for a positive integer k, so every pi/2
// gate spans a whole number of modulation periods.
bool has_frame_matched_modulation(const DriveConfig& cfg, double tol = 1e-9);

class PulseProgram {
 public:
  // start_time places the program on the global modulation clock, for
  // programs that continue an earlier one.
  explicit PulseProgram(const DriveConfig& cfg, double start_time = 0.0);

  PulseProgram& add(PulseSegment segment);
  PulseProgram& add_primitive(Primitive p);
  PulseProgram& add_clifford(int index);
  PulseProgram& gate(double angle, double phi_mw);
  PulseProgram& idle(double duration);
  // Appends the readout pad for the current total duration (nothing for the bare qubit).
  PulseProgram& pad();

  const std::vector<PulseSegment>& segments() const { return segments_; }
  const DriveConfig& config() const { return cfg_; }
  double total_duration() const { return total_; }
  double start_time() const { return start_; }
  bool empty() const { return segments_.empty(); }

 private:
  DriveConfig cfg_;
  std::vector<PulseSegment> segments_;
  double start_ = 0.0;
  double total_ = 0.0;
};

// One constant-parameter stretch of the compiled timeline. All pieces share
// the global modulation clock: t is sequence time, never reset per segment.
struct DrivePiece {
  double t_begin = 0.0;
  double t_end = 0.0;
  DriveConfig cfg;
  SegmentKind kind = SegmentKind::Gate;
  std::size_t segment = 0;
};

class CompiledProgram {
 public:
  CompiledProgram(DriveConfig base, std::vector<DrivePiece> pieces, double start, double end)
      : base_(base), pieces_(std::move(pieces)), start_(start), end_(end) {}

  const DriveConfig& base() const { return base_; }
  const std::vector<DrivePiece>& pieces() const { return pieces_; }
  double start_time() const { return start_; }
  double end_time() const { return end_; }
  double duration() const { return end_ - start_; }

  // Drive parameters in force at time t (the base config for an empty program).
  DriveConfig at(double t) const;

 private:
  DriveConfig base_;
  std::vector<DrivePiece> pieces_;
  double start_ = 0.0;
  double end_ = 0.0;
};

// Throws CompileError naming the segment when a boundary at which phi_mw
// changes, or the end of a readout pad, is not at Omega0 t = 0 mod 2pi, or
// when a bare program contains idle time.
CompiledProgram compile(const PulseProgram& program);

// Simulates from psi0 (first frame, at the program start time) and returns the first-frame state
// at the end of the program. Frame::Second integrates each piece in the
// second frame of its own phi_mw and converts at phi_mw changes; Frame::First
// integrates the first-frame Hamiltonian directly. The bare qubit is always
// integrated in the first frame.
QubitState simulate(const CompiledProgram& program, Frame frame, const IntegratorSpec& spec,
                    const QubitState& psi0 = QubitState::zero());

// Ideal second-frame action of the program at zero error (gates and idles as
// exact rotations), for oracle comparisons.
UnitaryOp ideal_action(const PulseProgram& program);

// One directive per line:
//   gate ANGLE [PHI_MW] | rabi ANGLE [PHI_MW] | idle DURATION | pad
//   i | x90 | -x90 | y90 | -y90 | x180 | y180 | clifford INDEX
// Angles are radians and accept a "pi" factor (pi/2, -pi, 1.5pi). `#` starts
// a comment. Throws ConfigError with the line number.
PulseProgram parse_program(std::string_view text, const DriveConfig& cfg);

}  // namespace ccd
