#include "ccd/drive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "ccd/error.hpp"

namespace ccd {

namespace {

constexpr double kAlphaTolerance = 1e-12;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void require_rabi(const DriveConfig& cfg, const char* where) {
  if (cfg.rabi == 0.0) throw ValidationError(std::string(where) + ": Rabi frequency is zero");
}

// (Omega0 + dOmega) / Omega0
double rabi_scale(const DriveConfig& cfg) { return 1.0 + cfg.rabi_error / cfg.rabi; }

}  // namespace

ModulationRatios ratios(Scheme scheme) {
  switch (scheme) {
    case Scheme::Bare: return {0.0, 0.0};
    case Scheme::AMCCD: return {1.0, 0.0};
    case Scheme::PMCCD: return {0.0, 1.0};
    case Scheme::CMCCD: return {0.5, 0.5};
  }
  return {};
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Bare: return "bare";
    case Scheme::AMCCD: return "am";
    case Scheme::PMCCD: return "pm";
    case Scheme::CMCCD: return "cm";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  const std::string s = lower(name);
  if (s == "bare") return Scheme::Bare;
  if (s == "am" || s == "amccd") return Scheme::AMCCD;
  if (s == "pm" || s == "pmccd") return Scheme::PMCCD;
  if (s == "cm" || s == "cmccd") return Scheme::CMCCD;
  throw ValidationError("unknown scheme '" + std::string(name) + "' (expected bare, am, pm, cm)");
}

DriveConfig DriveConfig::with_detuning(double delta) const {
  DriveConfig c = *this;
  c.omega_L = omega_mw + delta;
  return c;
}

DriveConfig DriveConfig::with_scheme(Scheme scheme) const {
  DriveConfig c = *this;
  const auto r = ratios(scheme);
  c.alpha_A = r.alpha_A;
  c.alpha_P = r.alpha_P;
  return c;
}

void DriveConfig::validate() const {
  if (!std::isfinite(omega_L) || !std::isfinite(omega_mw) || !std::isfinite(rabi) ||
      !std::isfinite(rabi_error) || !std::isfinite(mod_strength) || !std::isfinite(mod_phase) ||
      !std::isfinite(mw_phase) || !std::isfinite(alpha_A) || !std::isfinite(alpha_P))
    throw ValidationError("drive config: non-finite parameter");
  if (!(rabi > 0.0)) throw ValidationError("drive config: rabi must be > 0");
  if (mod_strength < 0.0) throw ValidationError("drive config: mod_strength must be >= 0");
  if (alpha_A < 0.0 || alpha_P < 0.0)
    throw ValidationError("drive config: alpha_A and alpha_P must be >= 0");
  const double sum = alpha_A + alpha_P;
  if (!(is_bare() || std::abs(sum - 1.0) <= kAlphaTolerance))
    throw ValidationError("drive config: alpha_A + alpha_P must be 1 (or both 0 for the bare qubit)");
}

DriveConfig default_config(Scheme scheme) {
  DriveConfig cfg;
  cfg.mod_strength = cfg.rabi / 4.0;
  return cfg.with_scheme(scheme);
}

double lab_drive_coefficient(const DriveConfig& cfg, double t) {
  const double s = std::sin(cfg.rabi * t - cfg.mod_phase);
  const double amp_depth = 2.0 * cfg.alpha_A * cfg.mod_strength / cfg.rabi;
  const double phase_depth = 2.0 * cfg.alpha_P * cfg.mod_strength / cfg.rabi;
  const double carrier = cfg.omega_mw * t + cfg.mw_phase - phase_depth * s;
  return (cfg.rabi + cfg.rabi_error) * (std::cos(carrier) + amp_depth * s * std::sin(carrier));
}

Hamiltonian lab_hamiltonian(const DriveConfig& cfg, double t) {
  return {lab_drive_coefficient(cfg, t), 0.0, cfg.omega_L / 2.0};
}

Hamiltonian first_frame_modulation(const DriveConfig& cfg, double t) {
  require_rabi(cfg, "first_frame_hamiltonian");
  const double arg = cfg.rabi * t - cfg.mod_phase;
  const double am = -rabi_scale(cfg) * cfg.alpha_A * cfg.mod_strength * std::sin(arg);
  const double pm = cfg.alpha_P * cfg.mod_strength * std::cos(arg);
  const double axis = cfg.mw_phase + kPi / 2.0;
  return {am * std::cos(axis), am * std::sin(axis), pm};
}

Hamiltonian first_frame_hamiltonian(const DriveConfig& cfg, double t) {
  const double drive = (cfg.rabi + cfg.rabi_error) / 2.0;
  const Hamiltonian carrier{drive * std::cos(cfg.mw_phase), drive * std::sin(cfg.mw_phase),
                            cfg.detuning() / 2.0};
  return carrier + first_frame_modulation(cfg, t);
}

double first_frame_phase(const DriveConfig& cfg, double t) {
  double phi = cfg.omega_mw * t / 2.0;
  if (cfg.alpha_P != 0.0 && cfg.mod_strength != 0.0) {
    require_rabi(cfg, "first_frame_unitary");
    phi -= cfg.alpha_P * cfg.mod_strength / cfg.rabi *
           (std::sin(cfg.rabi * t - cfg.mod_phase) + std::sin(cfg.mod_phase));
  }
  return phi;
}

UnitaryOp first_frame_unitary(const DriveConfig& cfg, double t) {
  return evolution_operator(z_generator(), first_frame_phase(cfg, t));
}

Hamiltonian first_frame_exact_hamiltonian(const DriveConfig& cfg, double t) {
  const double omega = lab_drive_coefficient(cfg, t);
  const double two_phi = 2.0 * first_frame_phase(cfg, t);
  const double phase_rate =
      cfg.omega_mw / 2.0 -
      cfg.alpha_P * cfg.mod_strength * std::cos(cfg.rabi * t - cfg.mod_phase);
  return {omega * std::cos(two_phi), -omega * std::sin(two_phi), cfg.omega_L / 2.0 - phase_rate};
}

double counter_rotating_coefficient(const DriveConfig& cfg) {
  require_rabi(cfg, "counter_rotating_coefficient");
  return (cfg.alpha_P - rabi_scale(cfg) * cfg.alpha_A) * cfg.mod_strength / 2.0;
}

double co_rotating_coefficient(const DriveConfig& cfg) {
  require_rabi(cfg, "co_rotating_coefficient");
  return (cfg.alpha_P + rabi_scale(cfg) * cfg.alpha_A) * cfg.mod_strength / 2.0;
}

SecondFrameTerms second_frame_terms(const DriveConfig& cfg, double t) {
  require_rabi(cfg, "second_frame_hamiltonian");
  const double phi = cfg.mw_phase;
  const double perp = phi + kPi / 2.0;
  const double wt = cfg.rabi * t;
  const double half_delta = cfg.detuning() / 2.0;
  const double half_error = cfg.rabi_error / 2.0;

  // a * sigma_phi + b * sigma_{phi+pi/2} + c * sigma_z
  auto in_frame = [&](double a, double b, double c) {
    return Hamiltonian{a * std::cos(phi) + b * std::cos(perp), a * std::sin(phi) + b * std::sin(perp),
                       c};
  };

  SecondFrameTerms terms;
  terms.error = in_frame(half_error, half_delta * std::sin(wt), half_delta * std::cos(wt));
  const double co = co_rotating_coefficient(cfg);
  terms.co_rotating = in_frame(0.0, co * std::sin(cfg.mod_phase), co * std::cos(cfg.mod_phase));
  const double counter = counter_rotating_coefficient(cfg);
  const double arg = 2.0 * wt - cfg.mod_phase;
  terms.counter_rotating = in_frame(0.0, counter * std::sin(arg), counter * std::cos(arg));
  return terms;
}

Hamiltonian second_frame_hamiltonian(const DriveConfig& cfg, double t) {
  return second_frame_terms(cfg, t).total();
}

UnitaryOp second_frame_unitary(const DriveConfig& cfg, double t) {
  return evolution_operator(axis_generator(cfg.mw_phase), cfg.rabi * t / 2.0);
}

IQSample iq_baseband(const DriveConfig& cfg, double t) {
  const double s = std::sin(cfg.rabi * t - cfg.mod_phase);
  const double amp_depth = 2.0 * cfg.alpha_A * cfg.mod_strength / cfg.rabi;
  const double phase_shift = 2.0 * cfg.alpha_P * cfg.mod_strength / cfg.rabi * s;
  const double scale = cfg.rabi + cfg.rabi_error;
  // cos(c - p) + a s sin(c - p) expanded on the carrier c = omega_mw t + phi_mw.
  const double cp = std::cos(phase_shift);
  const double sp = std::sin(phase_shift);
  return {t, scale * (cp - amp_depth * s * sp), -scale * (sp + amp_depth * s * cp)};
}

double IQSample::reconstruct(const DriveConfig& cfg) const {
  const double carrier = cfg.omega_mw * t + cfg.mw_phase;
  return i * std::cos(carrier) - q * std::sin(carrier);
}

double fastest_frequency(const DriveConfig& cfg, Frame frame) {
  double f = std::max({std::abs(cfg.rabi), std::abs(cfg.rabi + cfg.rabi_error), cfg.mod_strength,
                       std::abs(cfg.detuning())});
  if (frame == Frame::Second) f = std::max(f, 2.0 * std::abs(cfg.rabi));
  if (frame == Frame::Lab) f = std::max({f, std::abs(cfg.omega_mw), std::abs(cfg.omega_L)});
  return f;
}

TimeDependentHamiltonian make_hamiltonian(const DriveConfig& cfg, Frame frame) {
  const double fastest = fastest_frequency(cfg, frame);
  switch (frame) {
    case Frame::Lab:
      return {[cfg](double t) { return lab_hamiltonian(cfg, t); }, fastest};
    case Frame::First:
      return {[cfg](double t) { return first_frame_hamiltonian(cfg, t); }, fastest};
    case Frame::Second:
      return {[cfg](double t) { return second_frame_hamiltonian(cfg, t); }, fastest};
  }
  throw ValidationError("make_hamiltonian: unknown frame");
}

}  // namespace ccd
