#include "ccd/pulse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ccd/error.hpp"
#include "ccd/text.hpp"

namespace ccd {

namespace {

constexpr double kBoundaryTolerance = 1e-9;

// Distance of Omega0 t from the nearest multiple of 2 pi, in units of 2 pi.
double clock_misalignment(double rabi, double t) {
  const double cycles = rabi * t / kTwoPi;
  return std::abs(cycles - std::round(cycles));
}

void require_ccd_gate_config(const DriveConfig& cfg) {
  if (cfg.is_bare()) throw ValidationError("gate_pulse: bare config has no second-frame drive; use rabi_pulse");
  if (!(cfg.mod_strength > 0.0))
    throw ValidationError("gate_pulse: mod_strength is zero, no second-frame drive");
}

}  // namespace

std::string_view to_string(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::Gate: return "gate";
    case SegmentKind::Idle: return "idle";
    case SegmentKind::ReadoutPad: return "pad";
  }
  return "?";
}

PulseSegment gate_pulse(double angle, double phi_mw, const DriveConfig& cfg) {
  require_ccd_gate_config(cfg);
  if (!(angle > 0.0)) throw ValidationError("gate_pulse: angle must be > 0");
  std::ostringstream label;
  label << "gate(" << angle << ", " << phi_mw << ")";
  return {SegmentKind::Gate, angle / cfg.mod_strength, kPi / 2.0, phi_mw, label.str()};
}

PulseSegment rabi_pulse(double angle, double phi_mw, const DriveConfig& cfg) {
  if (!(angle > 0.0)) throw ValidationError("rabi_pulse: angle must be > 0");
  if (!(cfg.rabi > 0.0)) throw ValidationError("rabi_pulse: rabi must be > 0");
  std::ostringstream label;
  label << "rabi(" << angle << ", " << phi_mw << ")";
  return {SegmentKind::Gate, angle / cfg.rabi, kPi / 2.0, phi_mw, label.str()};
}

PulseSegment idle_pulse(double duration, const DriveConfig& cfg) {
  (void)cfg;
  if (!(duration >= 0.0)) throw ValidationError("idle_pulse: duration must be >= 0");
  return {SegmentKind::Idle, duration, 0.0, 0.0, "idle"};
}

PulseSegment readout_pad(double elapsed, const DriveConfig& cfg) {
  if (!(elapsed >= 0.0)) throw ValidationError("readout_pad: elapsed must be >= 0");
  if (!(cfg.rabi > 0.0)) throw ValidationError("readout_pad: rabi must be > 0");
  const double period = kTwoPi / cfg.rabi;
  const double cycles = elapsed / period;
  double whole = std::ceil(cycles);
  // Already aligned within tolerance: no padding.
  if (std::abs(cycles - std::round(cycles)) <= kBoundaryTolerance) whole = std::round(cycles);
  const double d = std::max(0.0, whole * period - elapsed);
  return {SegmentKind::ReadoutPad, d, 0.0, 0.0, "pad"};
}

std::vector<PulseSegment> primitive_pulses(Primitive p, const DriveConfig& cfg) {
  if (p == Primitive::I) return {PulseSegment{SegmentKind::Gate, 0.0, kPi / 2.0, 0.0, "I"}};
  const auto r = primitive_rotation(p);
  const double angle = std::abs(r.angle);
  // Bare rotates about sigma_phi; CCD gates about sigma_{phi + pi/2}.
  double axis = std::atan2(r.axis_y, r.axis_x);
  if (r.angle < 0.0) axis += kPi;
  PulseSegment seg = cfg.is_bare() ? rabi_pulse(angle, axis, cfg)
                                   : gate_pulse(angle, axis - kPi / 2.0, cfg);
  seg.label = std::string(to_string(p));
  return {seg};
}

bool has_frame_matched_modulation(const DriveConfig& cfg, double tol) {
  if (!(cfg.mod_strength > 0.0) || !(cfg.rabi > 0.0)) return false;
  const double k = cfg.rabi / (4.0 * cfg.mod_strength);
  return k >= 1.0 - tol && std::abs(k - std::round(k)) <= tol * std::max(1.0, k);
}

PulseProgram::PulseProgram(const DriveConfig& cfg, double start_time) : cfg_(cfg), start_(start_time) {
  cfg_.validate();
  if (!(start_time >= 0.0)) throw ValidationError("pulse program: start time must be >= 0");
}

PulseProgram& PulseProgram::add(PulseSegment segment) {
  if (!(segment.duration >= 0.0)) throw ValidationError("pulse segment: negative duration");
  total_ += segment.duration;
  segments_.push_back(std::move(segment));
  return *this;
}

PulseProgram& PulseProgram::add_primitive(Primitive p) {
  for (auto& s : primitive_pulses(p, cfg_)) add(std::move(s));
  return *this;
}

PulseProgram& PulseProgram::add_clifford(int index) {
  for (Primitive p : clifford(index).decomposition) add_primitive(p);
  return *this;
}

PulseProgram& PulseProgram::gate(double angle, double phi_mw) {
  return add(cfg_.is_bare() ? rabi_pulse(angle, phi_mw, cfg_) : gate_pulse(angle, phi_mw, cfg_));
}

PulseProgram& PulseProgram::idle(double duration) { return add(idle_pulse(duration, cfg_)); }

PulseProgram& PulseProgram::pad() {
  if (cfg_.is_bare()) return *this;
  return add(readout_pad(start_ + total_, cfg_));
}

DriveConfig CompiledProgram::at(double t) const {
  for (const auto& p : pieces_) {
    if (t >= p.t_begin && t < p.t_end) return p.cfg;
  }
  if (!pieces_.empty() && t >= pieces_.back().t_end) return pieces_.back().cfg;
  return base_;
}

CompiledProgram compile(const PulseProgram& program) {
  const DriveConfig& base = program.config();
  std::vector<DrivePiece> pieces;
  double t = program.start_time();
  const auto& segs = program.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const double t_end = t + s.duration;
    if (s.duration > 0.0) {
      if (base.is_bare() && s.kind != SegmentKind::Gate)
        throw CompileError(i, "bare qubit programs cannot contain idle or pad segments");
      DriveConfig cfg = base;
      cfg.mod_phase = s.theta_m;
      cfg.mw_phase = s.kind == SegmentKind::Gate ? s.phi_mw
                                                 : (pieces.empty() ? base.mw_phase : pieces.back().cfg.mw_phase);
      if (!base.is_bare() && !pieces.empty() && cfg.mw_phase != pieces.back().cfg.mw_phase &&
          clock_misalignment(base.rabi, t) > kBoundaryTolerance) {
        std::ostringstream msg;
        msg << "'" << s.label << "' changes phi_mw at t = " << t
            << " s, which is not a multiple of 2 pi / Omega0";
        throw CompileError(i, msg.str());
      }
      pieces.push_back({t, t_end, cfg, s.kind, i});
    }
    if (s.kind == SegmentKind::ReadoutPad && clock_misalignment(base.rabi, t_end) > kBoundaryTolerance)
      throw CompileError(i, "readout pad does not end at a multiple of 2 pi / Omega0");
    t = t_end;
  }
  return {base, std::move(pieces), program.start_time(), t};
}

QubitState simulate(const CompiledProgram& program, Frame frame, const IntegratorSpec& spec,
                    const QubitState& psi0) {
  if (frame == Frame::Lab) throw ValidationError("simulate: programs run in the first or second frame");
  const bool second = frame == Frame::Second && !program.base().is_bare();
  QubitState psi = psi0;
  const DriveConfig* previous = nullptr;
  for (const auto& piece : program.pieces()) {
    if (second) {
      if (previous == nullptr) {
        psi = second_frame_unitary(piece.cfg, piece.t_begin).adjoint() * psi;
      } else if (previous->mw_phase != piece.cfg.mw_phase) {
        psi = second_frame_unitary(piece.cfg, piece.t_begin).adjoint() *
              (second_frame_unitary(*previous, piece.t_begin) * psi);
      }
      psi = evolve(make_hamiltonian(piece.cfg, Frame::Second), psi, piece.t_begin, piece.t_end, spec);
    } else {
      psi = evolve(make_hamiltonian(piece.cfg, Frame::First), psi, piece.t_begin, piece.t_end, spec);
    }
    previous = &piece.cfg;
  }
  if (second && previous != nullptr) psi = second_frame_unitary(*previous, program.end_time()) * psi;
  return psi.normalized();
}

UnitaryOp ideal_action(const PulseProgram& program) {
  const DriveConfig& cfg = program.config();
  UnitaryOp u;
  for (const auto& s : program.segments()) {
    if (s.duration == 0.0) continue;
    if (cfg.is_bare()) {
      u = rotation(std::cos(s.phi_mw), std::sin(s.phi_mw), 0.0, cfg.rabi * s.duration) * u;
    } else if (s.kind == SegmentKind::Gate) {
      const double axis = s.phi_mw + kPi / 2.0;
      u = rotation(std::cos(axis), std::sin(axis), 0.0, cfg.mod_strength * s.duration) * u;
    } else {
      u = rotation(0.0, 0.0, 1.0, cfg.mod_strength * s.duration) * u;
    }
  }
  return u;
}

PulseProgram parse_program(std::string_view text, const DriveConfig& cfg) {
  PulseProgram program(cfg);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string op;
    in >> op;
    std::transform(op.begin(), op.end(), op.begin(), [](unsigned char c) { return std::tolower(c); });
    std::vector<std::string> args;
    for (std::string a; in >> a;) args.push_back(a);
    auto want = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi)
        throw ConfigError(line_no, 1, "'" + op + "' takes " + std::to_string(lo) +
                                          (lo == hi ? "" : "-" + std::to_string(hi)) + " argument(s)");
    };
    try {
      if (op == "gate" || op == "rabi") {
        want(1, 2);
        const double angle = parse_angle(args[0], line_no);
        const double phi = args.size() > 1 ? parse_angle(args[1], line_no) : 0.0;
        program.add(op == "gate" ? gate_pulse(angle, phi, cfg) : rabi_pulse(angle, phi, cfg));
      } else if (op == "idle") {
        want(1, 1);
        program.idle(parse_number(args[0], line_no));
      } else if (op == "pad") {
        want(0, 0);
        program.pad();
      } else if (op == "clifford") {
        want(1, 1);
        program.add_clifford(static_cast<int>(parse_number(args[0], line_no)));
      } else {
        want(0, 0);
        static const std::pair<const char*, Primitive> names[] = {
            {"i", Primitive::I},       {"x90", Primitive::X90},   {"-x90", Primitive::MX90},
            {"y90", Primitive::Y90},   {"-y90", Primitive::MY90}, {"x180", Primitive::X180},
            {"y180", Primitive::Y180}};
        const auto it = std::find_if(std::begin(names), std::end(names),
                                     [&](const auto& n) { return op == n.first; });
        if (it == std::end(names)) throw ConfigError(line_no, 1, "unknown directive '" + op + "'");
        program.add_primitive(it->second);
      }
    } catch (const ValidationError& e) {
      throw ConfigError(line_no, 1, e.what());
    }
  }
  return program;
}

}  // namespace ccd
