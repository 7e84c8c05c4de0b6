#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ccd/qubit.hpp"

namespace ccd {

enum class Method {
  ExponentialMidpoint,  // piecewise-constant exponential, Hamiltonian sampled at the step midpoint
  CommutatorFree4,      // two-exponential 4th-order commutator-free Magnus scheme
};

struct IntegratorSpec {
  Method method = Method::ExponentialMidpoint;
  double max_step = 1e-9;  // seconds
  int steps_per_fastest_period = 200;

  static IntegratorSpec lab_default();
  static IntegratorSpec rotating_default();

  // min(max_step, (2 pi / fastest_frequency) / steps_per_fastest_period).
  double step_for(double fastest_frequency) const;
  void validate() const;
};

// A time-dependent Hamiltonian together with the fastest angular frequency
// present in it; the latter sets the integration step.
struct TimeDependentHamiltonian {
  std::function<Hamiltonian(double)> field;
  double fastest_frequency = 0.0;  // rad/s
};

// Solves i d/dt psi = H(t) psi from t0 to t1.
QubitState evolve(const TimeDependentHamiltonian& h, const QubitState& psi0, double t0, double t1,
                  const IntegratorSpec& spec);

// States at each of the ascending `times` (all >= t0), integrating once through the grid.
std::vector<QubitState> evolve_sampled(const TimeDependentHamiltonian& h, const QubitState& psi0,
                                       double t0, std::span<const double> times,
                                       const IntegratorSpec& spec);

// U(t1, t0).
UnitaryOp propagator_unitary(const TimeDependentHamiltonian& h, double t0, double t1,
                             const IntegratorSpec& spec);

// |psi_h - psi_{h/2}|: the same propagation at the integrator's step and at half of it.
double step_halving_error(const TimeDependentHamiltonian& h, const QubitState& psi0, double t0,
                          double t1, const IntegratorSpec& spec);

}  // namespace ccd
