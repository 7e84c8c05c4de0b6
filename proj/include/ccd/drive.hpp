#pragma once

#include <string>
#include <string_view>

#include "ccd/propagator.hpp"
#include "ccd/qubit.hpp"

namespace ccd {

enum class Scheme { Bare, AMCCD, PMCCD, CMCCD };

struct ModulationRatios {
  double alpha_A = 0.0;
  double alpha_P = 0.0;
};

ModulationRatios ratios(Scheme scheme);
std::string_view to_string(Scheme scheme);
// Accepts "bare", "am", "pm", "cm" and the full names, case-insensitive.
Scheme parse_scheme(std::string_view name);

// Physical parameters of the modulated drive. Angular frequencies in rad/s.
struct DriveConfig {
  double omega_L = kTwoPi * 15e9;
  double omega_mw = kTwoPi * 15e9;
  double rabi = kTwoPi * 3.6e6;
  double rabi_error = 0.0;
  double mod_strength = kTwoPi * 0.9e6;
  double mod_phase = kPi / 2.0;
  double mw_phase = 0.0;
  double alpha_A = 0.5;
  double alpha_P = 0.5;

  // omega_L - omega_mw.
  double detuning() const { return omega_L - omega_mw; }

  // Shifts omega_L so that detuning() == delta.
  DriveConfig with_detuning(double delta) const;
  DriveConfig with_scheme(Scheme scheme) const;

  bool is_bare() const { return alpha_A == 0.0 && alpha_P == 0.0; }

  // Throws ValidationError on a violated invariant.
  void validate() const;

  bool operator==(const DriveConfig&) const = default;
};

// Defaults: Omega0 = 2pi 3.6 MHz, eps_m = Omega0/4, theta_m = pi/2, phi_mw = 0,
// omega_L = omega_mw = 2pi 15 GHz.
DriveConfig default_config(Scheme scheme);

// Coefficient of sigma_x in the lab-frame Hamiltonian at time t.
double lab_drive_coefficient(const DriveConfig& cfg, double t);

Hamiltonian lab_hamiltonian(const DriveConfig& cfg, double t);

// Rotating-frame Hamiltonian after the carrier rotating-wave approximation.
Hamiltonian first_frame_hamiltonian(const DriveConfig& cfg, double t);

// The modulation part of first_frame_hamiltonian alone.
Hamiltonian first_frame_modulation(const DriveConfig& cfg, double t);

// U1^dagger H_lab U1 - dPhi/dt sigma_z with no approximation; its dynamics
// are the lab-frame dynamics viewed through first_frame_unitary.
Hamiltonian first_frame_exact_hamiltonian(const DriveConfig& cfg, double t);

struct SecondFrameTerms {
  Hamiltonian error;
  Hamiltonian co_rotating;
  Hamiltonian counter_rotating;

  Hamiltonian total() const { return error + co_rotating + counter_rotating; }
};

SecondFrameTerms second_frame_terms(const DriveConfig& cfg, double t);
Hamiltonian second_frame_hamiltonian(const DriveConfig& cfg, double t);

// Frame phase Phi(t) = int_0^t [omega_mw/2 - alpha_P eps_m cos(Omega0 t' - theta_m)] dt'.
double first_frame_phase(const DriveConfig& cfg, double t);

// exp(-i Phi(t) sigma_z). Lab state = U1 * first-frame state. Because the
// integral starts at 0, the drive axis seen in this frame is sigma_phi with
// phi = phi_mw + 2 alpha_P eps_m sin(theta_m) / Omega0; a constant z rotation
// that leaves sigma_z populations untouched.
UnitaryOp first_frame_unitary(const DriveConfig& cfg, double t);

// exp(-i (Omega0 t / 2) sigma_{phi_mw}). First-frame state = U2 * second-frame state.
UnitaryOp second_frame_unitary(const DriveConfig& cfg, double t);

// [alpha_P - (1 + dOmega/Omega0) alpha_A] eps_m / 2.
double counter_rotating_coefficient(const DriveConfig& cfg);
// [alpha_P + (1 + dOmega/Omega0) alpha_A] eps_m / 2.
double co_rotating_coefficient(const DriveConfig& cfg);

// Baseband envelope such that i cos(omega_mw t + phi_mw) - q sin(omega_mw t + phi_mw)
// equals lab_drive_coefficient(cfg, t).
struct IQSample {
  double t = 0.0;
  double i = 0.0;
  double q = 0.0;

  double reconstruct(const DriveConfig& cfg) const;
};

IQSample iq_baseband(const DriveConfig& cfg, double t);

enum class Frame { Lab, First, Second };

// Largest angular frequency driving the dynamics in `frame`.
double fastest_frequency(const DriveConfig& cfg, Frame frame);

TimeDependentHamiltonian make_hamiltonian(const DriveConfig& cfg, Frame frame);

}  // namespace ccd
