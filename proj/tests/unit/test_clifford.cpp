#include <doctest.h>

#include <vector>

#include "ccd/clifford.hpp"
#include "ccd/error.hpp"
#include "ccd/pulse.hpp"
#include "ccd/random.hpp"

using namespace ccd;

TEST_CASE("primitive matrices") {
  CHECK(equal_up_to_phase(ideal_matrix(Primitive::I).matrix(), identity()));
  CHECK(equal_up_to_phase(ideal_matrix(Primitive::X180).matrix(), sigma_x()));
  CHECK(equal_up_to_phase(ideal_matrix(Primitive::Y180).matrix(), sigma_y()));
  CHECK(equal_up_to_phase((ideal_matrix(Primitive::X90) * ideal_matrix(Primitive::MX90)).matrix(), identity()));
}

TEST_CASE("clifford table") {
  REQUIRE(clifford_table().size() == 24);
  const auto& id = clifford(0);
  CHECK(id.decomposition == std::vector<Primitive>{Primitive::I});
  CHECK((id.matrix.matrix() - identity()).norm() < 1e-15);
  std::size_t total = 0;
  for (const auto& g : clifford_table()) {
    UnitaryOp u;
    for (Primitive p : g.decomposition) u = ideal_matrix(p) * u;
    CHECK(equal_up_to_phase(u.matrix(), g.matrix.matrix()));
    total += g.decomposition.size();
  }
  CHECK(static_cast<double>(total) / 24 == doctest::Approx(kPrimitivesPerClifford));
  CHECK_THROWS_AS(clifford(24), ValidationError);
  CHECK_THROWS_AS(clifford(-1), ValidationError);
}

TEST_CASE("group closure over all 576 pairs") {
  for (int a = 0; a < 24; ++a) {
    for (int b = 0; b < 24; ++b) {
      const int c = compose_cliffords(a, b);
      REQUIRE(c >= 0);
      CHECK(equal_up_to_phase((clifford(b).matrix * clifford(a).matrix).matrix(), clifford(c).matrix.matrix()));
    }
  }
  for (int a = 0; a < 24; ++a)
    for (int b = a + 1; b < 24; ++b) CHECK_FALSE(equal_up_to_phase(clifford(a).matrix.matrix(), clifford(b).matrix.matrix()));
}

TEST_CASE("recovery cliffords") {
  const int x180 = clifford_index_of(sigma_x());
  REQUIRE(x180 >= 0);
  const std::vector<int> one{x180};
  CHECK(recovery_clifford(one, RecoveryTarget::Down).index == x180);
  CHECK(recovery_clifford(one, RecoveryTarget::Up).index == 0);
  CHECK_THROWS_AS(recovery_clifford(std::vector<int>{}, RecoveryTarget::Up), ValidationError);

  KeyedStream rng(3, {});
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> seq(10);
    for (int& g : seq) g = static_cast<int>(rng.below(24));
    const UnitaryOp p = sequence_matrix(seq);
    for (RecoveryTarget target : {RecoveryTarget::Up, RecoveryTarget::Down}) {
      const auto& r = recovery_clifford(seq, target);
      // Brute force over the table.
      int found = -1;
      for (int c = 0; c < 24; ++c) {
        const double up = (clifford(c).matrix * p * QubitState::zero()).population_one();
        const bool ok = target == RecoveryTarget::Up ? up > 1 - 1e-12 : up < 1e-12;
        if (ok && found < 0) found = c;
      }
      const double up = (r.matrix * p * QubitState::zero()).population_one();
      CHECK(found >= 0);
      CHECK((target == RecoveryTarget::Up ? up : 1 - up) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("primitive pulses per scheme") {
  const DriveConfig cm = default_config(Scheme::CMCCD);
  const auto x = primitive_pulses(Primitive::X90, cm);
  REQUIRE(x.size() == 1);
  CHECK(x[0].phi_mw == doctest::Approx(-kPi / 2));
  CHECK(primitive_pulses(Primitive::Y90, cm)[0].phi_mw == doctest::Approx(0.0));
  const DriveConfig bare = default_config(Scheme::Bare);
  CHECK(primitive_pulses(Primitive::X90, bare)[0].phi_mw == doctest::Approx(0.0));
  CHECK(primitive_pulses(Primitive::Y90, bare)[0].phi_mw == doctest::Approx(kPi / 2));
  CHECK(primitive_pulses(Primitive::I, cm)[0].duration == 0.0);
  CHECK(primitive_pulses(Primitive::X180, cm)[0].duration == doctest::Approx(2 * kTwoPi / cm.rabi));
}

TEST_CASE("pulse-level cliffords realize the ideal matrices") {
  for (Scheme s : {Scheme::Bare, Scheme::CMCCD}) {
    const DriveConfig c = default_config(s);
    for (int i = 0; i < 24; ++i) {
      PulseProgram p(c);
      p.add_clifford(i).pad();
      const auto cp = compile(p);
      const IntegratorSpec spec = IntegratorSpec::rotating_default();
      const QubitState zero = simulate(cp, Frame::Second, spec, QubitState::zero());
      const QubitState plus = simulate(cp, Frame::Second, spec, QubitState(1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0))));
      CHECK(state_fidelity(zero, clifford(i).matrix * QubitState::zero()) >= 1 - 1e-9);
      CHECK(state_fidelity(plus, clifford(i).matrix * QubitState(1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0)))) >= 1 - 1e-9);
    }
  }
}
