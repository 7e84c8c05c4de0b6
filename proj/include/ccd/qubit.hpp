#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ccd {

using Complex = std::complex<double>;
using Operator = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerance on |a0|^2 + |a1|^2 - 1 accepted by state-consuming operations.
inline constexpr double kNormTolerance = 1e-10;

Operator identity();
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();

// cos(phi) sigma_x + sin(phi) sigma_y.
Operator pauli_axis(double phi);

// Traceless Hermitian generator x*sigma_x + y*sigma_y + z*sigma_z.
// Every Hamiltonian in this library has this form (hbar = 1, rad/s).
struct Hamiltonian {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Operator matrix() const;
  double norm() const;

  friend Hamiltonian operator+(const Hamiltonian& a, const Hamiltonian& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Hamiltonian operator-(const Hamiltonian& a, const Hamiltonian& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Hamiltonian operator*(double s, const Hamiltonian& h) { return {s * h.x, s * h.y, s * h.z}; }
};

// Unit generator along sigma_phi.
inline Hamiltonian axis_generator(double phi) { return {std::cos(phi), std::sin(phi), 0.0}; }
inline Hamiltonian z_generator() { return {0.0, 0.0, 1.0}; }

class QubitState {
 public:
  QubitState() = default;
  QubitState(Complex a0, Complex a1) : amp_(a0, a1) {}
  explicit QubitState(const Eigen::Vector2cd& v) : amp_(v) {}

  static QubitState zero() { return {1.0, 0.0}; }
  static QubitState one() { return {0.0, 1.0}; }

  Complex operator[](int i) const { return amp_(i); }
  const Eigen::Vector2cd& vector() const { return amp_; }

  double norm_squared() const { return amp_.squaredNorm(); }
  QubitState normalized() const { return QubitState(amp_ / amp_.norm()); }

  // |<1|psi>|^2, the spin-up fraction.
  double population_one() const { return std::norm(amp_(1)); }
  double population_zero() const { return std::norm(amp_(0)); }

 private:
  Eigen::Vector2cd amp_{1.0, 0.0};
};

class UnitaryOp {
 public:
  UnitaryOp() : m_(Operator::Identity()) {}
  explicit UnitaryOp(const Operator& m) : m_(m) {}

  static UnitaryOp identity() { return {}; }

  const Operator& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  UnitaryOp adjoint() const { return UnitaryOp(m_.adjoint()); }

  // Largest entry of |U^dagger U - I|.
  double unitarity_defect() const;

  friend UnitaryOp operator*(const UnitaryOp& a, const UnitaryOp& b) { return UnitaryOp(a.m_ * b.m_); }
  friend QubitState operator*(const UnitaryOp& u, const QubitState& s) {
    return QubitState(Eigen::Vector2cd(u.m_ * s.vector()));
  }

 private:
  Operator m_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double distance(const BlochVector& o) const {
    const double dx = x - o.x, dy = y - o.y, dz = z - o.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  }
};

// exp(-i * dt * H), closed-form axis-angle.
UnitaryOp evolution_operator(const Hamiltonian& h, double dt);

// Rotation by `angle` about the unit Bloch axis (nx, ny, nz): exp(-i angle/2 n.sigma).
UnitaryOp rotation(double nx, double ny, double nz, double angle);

// (<sigma_x>, <sigma_y>, <sigma_z>). Throws ValidationError for a non-normalized state.
BlochVector bloch_vector(const QubitState& state);

// |<b|a>|^2.
double state_fidelity(const QubitState& a, const QubitState& b);

// Throws ValidationError when |norm^2 - 1| exceeds tol.
void require_normalized(const QubitState& state, double tol = kNormTolerance);

// True when a = exp(i g) b for some phase g, entrywise within tol.
bool equal_up_to_phase(const Operator& a, const Operator& b, double tol = 1e-12);

}  // namespace ccd
