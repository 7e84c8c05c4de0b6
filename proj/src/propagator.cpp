#include "ccd/propagator.hpp"

#include <cmath>
#include <sstream>

#include "ccd/error.hpp"

namespace ccd {

namespace {

// SU(2) element [[a, -conj(b)], [b, conj(a)]].
struct SU2 {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  static SU2 exp_minus_i(const Hamiltonian& h, double dt) {
    const double r = h.norm();
    if (r == 0.0) return {};
    const double theta = r * dt;
    const double c = std::cos(theta);
    const double s = std::sin(theta) / r;
    return {{c, -s * h.z}, {s * h.y, -s * h.x}};
  }

  // this * o
  SU2 then_after(const SU2& o) const {
    return {a * o.a - std::conj(b) * o.b, b * o.a + std::conj(a) * o.b};
  }

  void apply(Complex& u, Complex& d) const {
    const Complex nu = a * u - std::conj(b) * d;
    const Complex nd = b * u + std::conj(a) * d;
    u = nu;
    d = nd;
  }
};

// Blanes-Moan CF4 weights on the two Gauss-Legendre nodes.
const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kCfA = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
const double kCfB = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;

SU2 step_unitary(const TimeDependentHamiltonian& h, double t, double dt, Method method) {
  if (method == Method::ExponentialMidpoint) {
    return SU2::exp_minus_i(h.field(t + 0.5 * dt), dt);
  }
  const Hamiltonian h1 = h.field(t + (0.5 - kGaussOffset) * dt);
  const Hamiltonian h2 = h.field(t + (0.5 + kGaussOffset) * dt);
  const SU2 first = SU2::exp_minus_i(kCfB * h1 + kCfA * h2, dt);
  const SU2 second = SU2::exp_minus_i(kCfA * h1 + kCfB * h2, dt);
  return second.then_after(first);
}

// Number of uniform sub-steps covering [t0, t1].
long step_count(double t0, double t1, double h) {
  const double n = std::ceil((t1 - t0) / h - 1e-9);
  return std::max(1L, static_cast<long>(n));
}

void check_norm(Complex& u, Complex& d, double t) {
  const double n2 = std::norm(u) + std::norm(d);
  const double drift = std::abs(n2 - 1.0);
  if (drift > 1e-8) {
    std::ostringstream msg;
    msg << "norm drift " << drift << " at t = " << t << " s exceeds 1e-8";
    throw IntegratorError(msg.str());
  }
  if (drift > 1e-12) {
    const double inv = 1.0 / std::sqrt(n2);
    u *= inv;
    d *= inv;
  }
}

void advance(const TimeDependentHamiltonian& h, Complex& u, Complex& d, double t0, double t1,
             const IntegratorSpec& spec) {
  if (t1 <= t0) return;
  const double hstep = spec.step_for(h.fastest_frequency);
  const long n = step_count(t0, t1, hstep);
  const double dt = (t1 - t0) / static_cast<double>(n);
  for (long k = 0; k < n; ++k) {
    step_unitary(h, t0 + static_cast<double>(k) * dt, dt, spec.method).apply(u, d);
  }
  check_norm(u, d, t1);
}

void require_interval(double t0, double t1) {
  if (!(t1 >= t0)) throw ValidationError("evolve: t1 must be >= t0");
}

}  // namespace

IntegratorSpec IntegratorSpec::lab_default() {
  return {Method::CommutatorFree4, 1e-9, 40};
}

IntegratorSpec IntegratorSpec::rotating_default() {
  return {Method::CommutatorFree4, 1e-9, 200};
}

double IntegratorSpec::step_for(double fastest_frequency) const {
  if (fastest_frequency <= 0.0) return max_step;
  return std::min(max_step, kTwoPi / fastest_frequency / steps_per_fastest_period);
}

void IntegratorSpec::validate() const {
  if (!(max_step > 0.0)) throw ValidationError("integrator: max_step must be positive");
  if (steps_per_fastest_period < 40)
    throw ValidationError("integrator: steps_per_fastest_period must be >= 40");
}

QubitState evolve(const TimeDependentHamiltonian& h, const QubitState& psi0, double t0, double t1,
                  const IntegratorSpec& spec) {
  spec.validate();
  require_interval(t0, t1);
  require_normalized(psi0);
  Complex u = psi0[0], d = psi0[1];
  advance(h, u, d, t0, t1, spec);
  return {u, d};
}

std::vector<QubitState> evolve_sampled(const TimeDependentHamiltonian& h, const QubitState& psi0,
                                       double t0, std::span<const double> times,
                                       const IntegratorSpec& spec) {
  spec.validate();
  require_normalized(psi0);
  std::vector<QubitState> out;
  out.reserve(times.size());
  Complex u = psi0[0], d = psi0[1];
  double t = t0;
  for (double target : times) {
    require_interval(t, target);
    advance(h, u, d, t, target, spec);
    t = target;
    out.emplace_back(u, d);
  }
  return out;
}

UnitaryOp propagator_unitary(const TimeDependentHamiltonian& h, double t0, double t1,
                             const IntegratorSpec& spec) {
  spec.validate();
  require_interval(t0, t1);
  if (t1 == t0) return UnitaryOp::identity();
  const double hstep = spec.step_for(h.fastest_frequency);
  const long n = step_count(t0, t1, hstep);
  const double dt = (t1 - t0) / static_cast<double>(n);
  SU2 acc;
  for (long k = 0; k < n; ++k) {
    acc = step_unitary(h, t0 + static_cast<double>(k) * dt, dt, spec.method).then_after(acc);
  }
  const double det_drift = std::abs(std::norm(acc.a) + std::norm(acc.b) - 1.0);
  if (det_drift > 1e-8) {
    std::ostringstream msg;
    msg << "propagator lost unitarity: drift " << det_drift;
    throw IntegratorError(msg.str());
  }
  if (det_drift > 1e-12) {
    const double inv = 1.0 / std::sqrt(std::norm(acc.a) + std::norm(acc.b));
    acc.a *= inv;
    acc.b *= inv;
  }
  Operator m;
  m << acc.a, -std::conj(acc.b), acc.b, std::conj(acc.a);
  return UnitaryOp(m);
}

double step_halving_error(const TimeDependentHamiltonian& h, const QubitState& psi0, double t0,
                          double t1, const IntegratorSpec& spec) {
  const QubitState coarse = evolve(h, psi0, t0, t1, spec);
  IntegratorSpec fine = spec;
  fine.max_step = spec.max_step / 2.0;
  fine.steps_per_fastest_period = spec.steps_per_fastest_period * 2;
  const QubitState refined = evolve(h, psi0, t0, t1, fine);
  return (coarse.vector() - refined.vector()).norm();
}

}  // namespace ccd
