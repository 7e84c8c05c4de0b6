#include "ccd/clifford.hpp"

#include <string>

#include "ccd/error.hpp"

namespace ccd {

namespace {

using P = Primitive;

// Standard single-qubit Clifford decomposition: Paulis, 2pi/3 rotations,
// pi/2 rotations and Hadamard-like elements. 45 primitives over 24 elements.
const std::array<std::vector<Primitive>, kCliffordCount> kDecompositions = {{
    {P::I},
    {P::X180},
    {P::Y180},
    {P::Y180, P::X180},
    {P::X90, P::Y90},
    {P::X90, P::MY90},
    {P::MX90, P::Y90},
    {P::MX90, P::MY90},
    {P::Y90, P::X90},
    {P::Y90, P::MX90},
    {P::MY90, P::X90},
    {P::MY90, P::MX90},
    {P::X90},
    {P::MX90},
    {P::Y90},
    {P::MY90},
    {P::MX90, P::Y90, P::X90},
    {P::MX90, P::MY90, P::X90},
    {P::X180, P::Y90},
    {P::X180, P::MY90},
    {P::Y180, P::X90},
    {P::Y180, P::MX90},
    {P::X90, P::Y90, P::X90},
    {P::MX90, P::Y90, P::MX90},
}};

std::array<CliffordGate, kCliffordCount> build_table() {
  std::array<CliffordGate, kCliffordCount> table;
  for (int i = 0; i < kCliffordCount; ++i) {
    UnitaryOp m;
    for (Primitive p : kDecompositions[i]) m = ideal_matrix(p) * m;
    table[i] = CliffordGate{i, kDecompositions[i], m};
  }
  return table;
}

const std::array<CliffordGate, kCliffordCount>& table() {
  static const auto t = build_table();
  return t;
}

// compose[first][second] = index of C_second * C_first
std::array<std::array<int, kCliffordCount>, kCliffordCount> build_composition() {
  std::array<std::array<int, kCliffordCount>, kCliffordCount> out{};
  for (int a = 0; a < kCliffordCount; ++a) {
    for (int b = 0; b < kCliffordCount; ++b) {
      out[a][b] = clifford_index_of((table()[b].matrix * table()[a].matrix).matrix());
      if (out[a][b] < 0) throw Error("Clifford table is not closed under composition");
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Primitive p) {
  switch (p) {
    case P::I: return "I";
    case P::X90: return "X90";
    case P::MX90: return "-X90";
    case P::Y90: return "Y90";
    case P::MY90: return "-Y90";
    case P::X180: return "X180";
    case P::Y180: return "Y180";
  }
  return "?";
}

PrimitiveRotation primitive_rotation(Primitive p) {
  switch (p) {
    case P::I: return {1.0, 0.0, 0.0};
    case P::X90: return {1.0, 0.0, kPi / 2.0};
    case P::MX90: return {1.0, 0.0, -kPi / 2.0};
    case P::Y90: return {0.0, 1.0, kPi / 2.0};
    case P::MY90: return {0.0, 1.0, -kPi / 2.0};
    case P::X180: return {1.0, 0.0, kPi};
    case P::Y180: return {0.0, 1.0, kPi};
  }
  return {};
}

UnitaryOp ideal_matrix(Primitive p) {
  if (p == P::I) return UnitaryOp::identity();
  const auto r = primitive_rotation(p);
  return rotation(r.axis_x, r.axis_y, 0.0, r.angle);
}

const CliffordGate& clifford(int index) {
  if (index < 0 || index >= kCliffordCount)
    throw ValidationError("clifford index " + std::to_string(index) + " outside [0, 24)");
  return table()[index];
}

std::span<const CliffordGate> clifford_table() { return table(); }

int clifford_index_of(const Operator& u) {
  for (const auto& g : table()) {
    if (equal_up_to_phase(u, g.matrix.matrix(), 1e-9)) return g.index;
  }
  return -1;
}

int compose_cliffords(int first, int second) {
  static const auto composition = build_composition();
  clifford(first);
  clifford(second);
  return composition[first][second];
}

UnitaryOp sequence_matrix(std::span<const int> sequence) {
  UnitaryOp m;
  for (int i : sequence) m = clifford(i).matrix * m;
  return m;
}

const CliffordGate& recovery_clifford(std::span<const int> applied, RecoveryTarget target) {
  if (applied.empty()) throw ValidationError("recovery_clifford: empty sequence");
  int product = applied.front();
  clifford(product);
  for (std::size_t k = 1; k < applied.size(); ++k) product = compose_cliffords(product, applied[k]);

  const int goal = target == RecoveryTarget::Down ? 0 : 1;  // identity or X180
  for (int c = 0; c < kCliffordCount; ++c) {
    if (compose_cliffords(product, c) == goal) return table()[c];
  }
  throw Error("recovery_clifford: no recovery element found; group closure violated");
}

}  // namespace ccd
