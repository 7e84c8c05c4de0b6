#include <cmath>
#include <functional>
#include <ostream>
#include <string>

#include "ccd/clifford.hpp"
#include "ccd/drive.hpp"
#include "ccd/io/cli.hpp"
#include "ccd/io/config.hpp"
#include "ccd/propagator.hpp"
#include "ccd/pulse.hpp"
#include "ccd/trajectory.hpp"

namespace ccd::io {

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto check = [&](const std::string& name, const std::function<bool()>& body) {
    bool ok = false;
    std::string why;
    try {
      ok = body();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << why << "\n";
    all = all && ok;
  };
  const DriveConfig cm = default_config(Scheme::CMCCD);
  const double w = cm.rabi;
  const IntegratorSpec spec = IntegratorSpec::rotating_default();

  check("counter-rotating coefficient cancels for cm", [&] { return counter_rotating_coefficient(cm) == 0.0; });
  check("counter-rotating coefficient am/pm = -/+ eps/2", [&] {
    const auto am = default_config(Scheme::AMCCD), pm = default_config(Scheme::PMCCD);
    return counter_rotating_coefficient(am) == -am.mod_strength / 2 &&
           counter_rotating_coefficient(pm) == pm.mod_strength / 2;
  });
  check("pauli axis squares to identity", [] { return (pauli_axis(0.7) * pauli_axis(0.7) - identity()).norm() < 1e-14; });
  check("pi pulse flips |0>", [&] {
    TimeDependentHamiltonian h{[&](double) { return Hamiltonian{w / 2, 0, 0}; }, w};
    return evolve(h, QubitState::zero(), 0.0, kPi / w, spec).population_one() > 1 - 1e-10;
  });
  check("bare rabi formula at delta = Omega0", [&] {
    const DriveConfig bare = default_config(Scheme::Bare).with_detuning(w);
    const double p = evolve(make_hamiltonian(bare, Frame::First), QubitState::zero(), 0, kPi / w, spec).population_one();
    const double oracle = 0.5 * std::pow(std::sin(std::sqrt(2.0) * kPi / 2), 2);
    return std::abs(p - oracle) < 1e-9;
  });
  check("cm Y_pi on resonance", [&] {
    return infidelity_curve(Scheme::CMCCD, cm, ErrorAxis::Detuning, {0.0}).front().second < 1e-10;
  });
  check("clifford group closure", [] {
    for (int a = 0; a < kCliffordCount; ++a)
      for (int b = 0; b < kCliffordCount; ++b)
        if (compose_cliffords(a, b) < 0) return false;
    return true;
  });
  check("readout pad aligns the clock", [&] {
    const double d = readout_pad(3 * kPi / w, cm).duration;
    return std::abs(d - kPi / w) < 1e-15;
  });
  check("iq round trip", [&] {
    const DriveConfig pm = default_config(Scheme::PMCCD);
    for (int k = 0; k < 1000; ++k) {
      const double t = 1e-9 * k;
      const double ref = lab_drive_coefficient(pm, t);
      if (std::abs(iq_baseband(pm, t).reconstruct(pm) - ref) > 1e-10 * pm.rabi) return false;
    }
    return true;
  });
  check("config round trip", [] {
    const RunConfig c = parse_config("scheme = cm\nrabi_hz = 3.6e6\nmod_ratio = 0.25\n");
    return parse_config(emit_config(c)) == c && c.drive().mod_strength == c.drive().rabi / 4;
  });
  return all;
}

}  // namespace ccd::io
