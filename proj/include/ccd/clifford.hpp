#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "ccd/qubit.hpp"

namespace ccd {

// Primitive single-qubit gates; angles in the name, M = negative rotation.
enum class Primitive { I, X90, MX90, Y90, MY90, X180, Y180 };

std::string_view to_string(Primitive p);

struct PrimitiveRotation {
  double axis_x = 0.0;
  double axis_y = 0.0;
  double angle = 0.0;  // signed, radians
};

PrimitiveRotation primitive_rotation(Primitive p);
UnitaryOp ideal_matrix(Primitive p);

inline constexpr int kCliffordCount = 24;
// Mean number of primitives per Clifford over the table below.
inline constexpr double kPrimitivesPerClifford = 1.875;

struct CliffordGate {
  int index = 0;
  std::vector<Primitive> decomposition;  // in time order
  UnitaryOp matrix;
};

// Throws ValidationError for index outside [0, 24).
const CliffordGate& clifford(int index);
std::span<const CliffordGate> clifford_table();

// Index of the table element equal to `u` up to global phase, or -1.
int clifford_index_of(const Operator& u);

// Index of clifford(second) * clifford(first).
int compose_cliffords(int first, int second);

// Spin up is |1>, spin down |0>; sequences start in |0>.
enum class RecoveryTarget { Up, Down };

// The element C with C * P equal to the identity (Down) or X180 (Up) up to
// global phase, where P is the product of `applied` in order. Throws
// ValidationError for an empty sequence and Error if the table is not closed.
const CliffordGate& recovery_clifford(std::span<const int> applied, RecoveryTarget target);

// Ideal product of a Clifford index sequence.
UnitaryOp sequence_matrix(std::span<const int> sequence);

}  // namespace ccd
