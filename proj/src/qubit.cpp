#include "ccd/qubit.hpp"

#include <cmath>
#include <sstream>

#include "ccd/error.hpp"

namespace ccd {

namespace {
constexpr Complex kI{0.0, 1.0};
}

Operator identity() { return Operator::Identity(); }

Operator sigma_x() {
  Operator m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Operator sigma_y() {
  Operator m;
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Operator sigma_z() {
  Operator m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Operator pauli_axis(double phi) { return std::cos(phi) * sigma_x() + std::sin(phi) * sigma_y(); }

Operator Hamiltonian::matrix() const {
  Operator m;
  m << Complex(z, 0.0), Complex(x, -y), Complex(x, y), Complex(-z, 0.0);
  return m;
}

double Hamiltonian::norm() const { return std::sqrt(x * x + y * y + z * z); }

double UnitaryOp::unitarity_defect() const {
  return (m_.adjoint() * m_ - Operator::Identity()).cwiseAbs().maxCoeff();
}

UnitaryOp evolution_operator(const Hamiltonian& h, double dt) {
  const double r = h.norm();
  if (r == 0.0 || dt == 0.0) return UnitaryOp::identity();
  const double theta = r * dt;
  const double c = std::cos(theta);
  const double s = std::sin(theta) / r;
  Operator m;
  m << Complex(c, -s * h.z), Complex(-s * h.y, -s * h.x), Complex(s * h.y, -s * h.x),
      Complex(c, s * h.z);
  return UnitaryOp(m);
}

UnitaryOp rotation(double nx, double ny, double nz, double angle) {
  const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (r == 0.0) throw ValidationError("rotation: zero axis");
  return evolution_operator({nx / r, ny / r, nz / r}, angle / 2.0);
}

void require_normalized(const QubitState& state, double tol) {
  const double drift = std::abs(state.norm_squared() - 1.0);
  if (!(drift <= tol)) {
    std::ostringstream msg;
    msg << "state not normalized: |norm^2 - 1| = " << drift;
    throw ValidationError(msg.str());
  }
}

BlochVector bloch_vector(const QubitState& state) {
  require_normalized(state);
  const Complex a = state[0];
  const Complex b = state[1];
  const Complex cross = std::conj(a) * b;
  return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(a) - std::norm(b)};
}

double state_fidelity(const QubitState& a, const QubitState& b) {
  const double f = std::norm(b.vector().dot(a.vector()));
  return std::min(1.0, f);
}

bool equal_up_to_phase(const Operator& a, const Operator& b, double tol) {
  // Align phase on the largest entry of b.
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(a(r, c)) < 1e-14) return false;
  const Complex phase = b(r, c) / a(r, c);
  const Complex unit = phase / std::abs(phase);
  return (a * unit - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ccd
