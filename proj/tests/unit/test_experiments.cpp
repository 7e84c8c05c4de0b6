#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ccd/error.hpp"
#include "ccd/fit.hpp"
#include "ccd/noise.hpp"
#include "ccd/random.hpp"
#include "ccd/sequences.hpp"
#include "ccd/spectrum.hpp"
#include "ccd/sweep.hpp"
#include "ccd/trajectory.hpp"

using namespace ccd;

namespace {

double rabi_formula(double rabi, double delta, double t) {
  const double w = std::hypot(rabi, delta);
  const double s = std::sin(w * t / 2);
  return rabi * rabi / (w * w) * s * s;
}

DriveConfig with_rabi(Scheme s, double rabi_hz) {
  DriveConfig c = default_config(s);
  c.rabi = kTwoPi * rabi_hz;
  c.mod_strength = c.rabi / 4;
  return c;
}

}  // namespace

TEST_CASE("linspace") {
  const auto v = linspace(0.0, 1.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v[2] == 0.5);
  CHECK(v.back() == 1.0);
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
}

TEST_CASE("bare chevron points") {
  const DriveConfig c = default_config(Scheme::Bare);
  const std::vector<double> det{0.0, c.rabi};
  const std::vector<double> dur{kPi / c.rabi, 0.77e-6};
  const auto g = chevron_sweep(Scheme::Bare, c, det, dur);
  CHECK(g.values(0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(g.values(1, 0) == doctest::Approx(0.3166).epsilon(1e-3));
  CHECK(g.values(1, 1) == doctest::Approx(rabi_formula(c.rabi, c.rabi, 0.77e-6)).epsilon(1e-9));
  CHECK(g.meta.readout == Readout::Raw);
}

TEST_CASE("chevron with zero modulation reduces to the bare chevron") {
  DriveConfig c = default_config(Scheme::CMCCD);
  c.mod_strength = 0.0;
  const auto det = linspace(-c.rabi, c.rabi, 5);
  const auto dur = linspace(0.0, 1e-6, 16);
  const auto a = chevron_sweep(Scheme::CMCCD, c, det, dur, Readout::Raw);
  const auto b = chevron_sweep(Scheme::Bare, default_config(Scheme::Bare), det, dur, Readout::Raw);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("grid values lie in [0, 1] and are thread-count independent") {
  const DriveConfig c = default_config(Scheme::PMCCD);
  const auto det = linspace(-0.5 * c.rabi, 0.5 * c.rabi, 7);
  const auto dur = linspace(0.0, 2e-6, 40);
  RunOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto a = chevron_sweep(Scheme::PMCCD, c, det, dur, Readout::Auto, one);
  const auto b = chevron_sweep(Scheme::PMCCD, c, det, dur, Readout::Auto, many);
  CHECK(a.values.minCoeff() >= 0.0);
  CHECK(a.values.maxCoeff() <= 1.0);
  CHECK(a.values == b.values);
}

TEST_CASE("rabi error sweep: zero row equals the resonant chevron row") {
  const DriveConfig c = default_config(Scheme::AMCCD);
  const auto dur = linspace(0.0, 1e-6, 20);
  const auto r = rabi_error_sweep(Scheme::AMCCD, c, {-0.1 * c.rabi, 0.0}, dur);
  const auto ch = chevron_sweep(Scheme::AMCCD, c, {0.0}, dur);
  CHECK((r.values.row(1) - ch.values.row(0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dominant frequency of a synthetic sinusoid") {
  const auto t = linspace(0.0, 1023e-9, 1024);
  for (double f : {13.3e6, 101.7e6, 250e6}) {
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::sin(kTwoPi * f * t[i]);
    CHECK(std::abs(dominant_frequency(t, y) - f) <= bin_width(t));
  }
  CHECK_THROWS_AS(uniform_step(std::vector<double>{0.0, 1.0, 3.0}), ValidationError);
  CHECK(magnitude_spectrum(std::vector<double>(64, 1.0)).size() == 33);
}

TEST_CASE("bare chevron columns follow the generalized Rabi frequency") {
  const DriveConfig c = default_config(Scheme::Bare);
  const auto dur = linspace(0.0, 10e-6, 512);
  const std::vector<double> det{-2 * c.rabi, -0.7 * c.rabi, 0.0, 1.3 * c.rabi};
  const auto g = chevron_sweep(Scheme::Bare, c, det, dur);
  const auto spec = spectrum(g);
  for (std::size_t i = 0; i < det.size(); ++i) {
    const Eigen::VectorXd row = g.values.row(static_cast<Eigen::Index>(i));
    const double f = dominant_frequency(dur, std::span<const double>(row.data(), row.size()));
    CHECK(f == doctest::Approx(std::hypot(c.rabi, det[i]) / kTwoPi).epsilon(0.01));
  }
  CHECK(spec.values.cols() == 257);
}

TEST_CASE("CCD resonant column oscillates at eps_m") {
  for (Scheme s : {Scheme::AMCCD, Scheme::PMCCD, Scheme::CMCCD}) {
    const DriveConfig c = default_config(s);
    const auto dur = linspace(0.0, 10e-6, 512);
    const auto row = rabi_trace(s, c, dur);
    CHECK(std::abs(dominant_frequency(dur, row) - c.mod_strength / kTwoPi) <= bin_width(dur));
  }
}

TEST_CASE("fit of a decaying sinusoid") {
  const auto t = linspace(0.0, 20e-6, 400);
  std::vector<double> y(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) y[i] = std::exp(-t[i] / 10e-6) * std::sin(kTwoPi * 1e6 * t[i] + 0.3) + 0.5;
  const auto f = fit_decaying_sinusoid(t, y, 0.5e-6);
  REQUIRE(f.converged);
  CHECK(f.amplitude == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(f.frequency == doctest::Approx(1e6).epsilon(1e-3));
  CHECK(f.t2 == doctest::Approx(10e-6).epsilon(1e-3));
  CHECK(f.offset == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(f.phase == doctest::Approx(0.3).epsilon(1e-3));
  REQUIRE(f.quality_factor);
  CHECK(*f.quality_factor == doctest::Approx(20.0).epsilon(1e-3));

  for (std::size_t i = 0; i < t.size(); ++i) y[i] = 0.5 * std::cos(kTwoPi * 0.7e6 * t[i]);
  const auto g = fit_decaying_sinusoid(t, y);
  CHECK(g.converged);
  CHECK(g.t2_unbounded);
  CHECK(std::isinf(g.t2));
  CHECK(g.frequency == doctest::Approx(0.7e6).epsilon(1e-6));

  const auto short_fit = fit_decaying_sinusoid(std::span(t).first(8), std::span(y).first(8));
  CHECK_FALSE(short_fit.converged);
  CHECK_FALSE(short_fit.message.empty());
}

TEST_CASE("noise average basics") {
  const DriveConfig c = default_config(Scheme::Bare);
  const auto dur = linspace(0.0, 2e-6, 32);
  const Experiment exp = [&](const DriveConfig& d) { return rabi_trace(Scheme::Bare, d, dur); };
  NoiseSpec silent;
  silent.samples = 50;
  CHECK(noise_average(exp, silent, c) == exp(c));

  NoiseSpec n{0.1 * c.rabi, 0.02, 40, 17};
  CHECK(noise_average(exp, n, c, 1) == noise_average(exp, n, c, 4));
  const DriveConfig a = noisy_config(c, n, 5), b = noisy_config(c, n, 5);
  CHECK(a == b);
  CHECK(noisy_config(c, n, 6) != a);
  CHECK(noisy_config(c, n, 5, 1) != a);
  n.samples = 0;
  CHECK_THROWS_AS(n.validate(), ValidationError);
}

TEST_CASE("quasi-static detuning noise matches the averaged Rabi formula") {
  const DriveConfig c = with_rabi(Scheme::Bare, 1e6);
  const auto dur = linspace(0.0, 12e-6, 240);
  const Experiment exp = [&](const DriveConfig& d) { return rabi_trace(Scheme::Bare, d, dur); };
  const double sigma = 0.35 * c.rabi;
  const NoiseSpec noise{sigma, 0.0, 2000, 4};
  const auto mc = noise_average(exp, noise, c);

  // Gaussian average of the Rabi formula by trapezoid quadrature over +-8 sigma.
  std::vector<double> ref(dur.size(), 0.0);
  const int n = 4001;
  double wsum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = -8.0 + 16.0 * k / (n - 1);
    const double w = std::exp(-0.5 * x * x) * ((k == 0 || k == n - 1) ? 0.5 : 1.0);
    wsum += w;
    for (std::size_t i = 0; i < dur.size(); ++i) ref[i] += w * rabi_formula(c.rabi, sigma * x, dur[i]);
  }
  for (double& v : ref) v /= wsum;

  const auto fm = fit_decaying_sinusoid(dur, mc);
  const auto fr = fit_decaying_sinusoid(dur, ref);
  REQUIRE(fm.converged);
  REQUIRE(fr.converged);
  CHECK(std::isfinite(fr.t2));
  CHECK(fm.t2 == doctest::Approx(fr.t2).epsilon(0.10));
}

TEST_CASE("fitted T2 shrinks as detuning noise grows") {
  const DriveConfig c = with_rabi(Scheme::Bare, 1e6);
  const auto dur = linspace(0.0, 12e-6, 240);
  const Experiment exp = [&](const DriveConfig& d) { return rabi_trace(Scheme::Bare, d, dur); };
  double last = std::numeric_limits<double>::infinity();
  for (double frac : {0.2, 0.35, 0.5}) {
    const auto f = fit_decaying_sinusoid(dur, noise_average(exp, NoiseSpec{frac * c.rabi, 0.0, 600, 8}, c));
    REQUIRE(f.converged);
    CHECK(f.t2 < last);
    last = f.t2;
  }
}

TEST_CASE("CCD Rabi outlives bare Rabi under detuning noise in gate units") {
  const double sigma = kTwoPi * 0.3e6;
  auto quality = [&](Scheme s, double span) {
    const DriveConfig c = with_rabi(s, 1e6);
    const auto dur = linspace(0.0, span, 240);
    const Experiment exp = [&](const DriveConfig& d) { return rabi_trace(s, d, dur); };
    const auto f = fit_decaying_sinusoid(dur, noise_average(exp, NoiseSpec{sigma, 0.0, 400, 2}, c),
                                         kPi / nominal_rate(s, c));
    REQUIRE(f.converged);
    return *f.quality_factor;
  };
  const double bare = quality(Scheme::Bare, 10e-6);
  const double ccd = quality(Scheme::CMCCD, 40e-6);
  MESSAGE("Q bare " << bare << ", Q cm " << ccd);
  CHECK(ccd >= bare);
}

TEST_CASE("infidelity curves") {
  const DriveConfig cm = default_config(Scheme::CMCCD);
  const double r = cm.rabi;
  CHECK(infidelity_curve(Scheme::CMCCD, cm, ErrorAxis::Detuning, {0.0})[0].second <= 1e-10);
  const double bare = infidelity_curve(Scheme::Bare, default_config(Scheme::Bare), ErrorAxis::Detuning, {0.1 * r})[0].second;
  const double s = std::sin(std::sqrt(1.01) * kPi / 2);
  CHECK(bare == doctest::Approx(1 - s * s / 1.01).epsilon(1e-6));
  const double am = infidelity_curve(Scheme::AMCCD, default_config(Scheme::AMCCD), ErrorAxis::Detuning, {0.0})[0].second;
  const double pm = infidelity_curve(Scheme::PMCCD, default_config(Scheme::PMCCD), ErrorAxis::Detuning, {0.0})[0].second;
  CHECK(am > 1e-8);
  CHECK(pm > 1e-8);
  const auto curve = infidelity_curve(Scheme::CMCCD, cm, ErrorAxis::Rabi, {-0.1 * r, 0.0, 0.1 * r});
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].first == -0.1 * r);
  CHECK(curve[0].second > curve[1].second);
}

TEST_CASE("bloch trajectories") {
  const double total = 20 * kPi;
  const auto bare = bloch_trajectory(Scheme::Bare, default_config(Scheme::Bare), total, 16);
  CHECK(bare.spread <= 1e-8);
  CHECK(bare.markers.size() == 40);
  for (const auto& sm : bare.samples) CHECK(sm.bloch.norm() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bloch_trajectory(Scheme::CMCCD, default_config(Scheme::CMCCD), total, 16).spread <= 1e-8);
  CHECK(bloch_trajectory(Scheme::AMCCD, default_config(Scheme::AMCCD), total, 16).spread > 0.0);
  CHECK(bloch_trajectory(Scheme::PMCCD, default_config(Scheme::PMCCD), total, 16).spread > 0.0);
  CHECK_THROWS_AS(bloch_trajectory(Scheme::Bare, default_config(Scheme::Bare), 1.0, 16), ValidationError);
}

TEST_CASE("dressed sequences") {
  const DriveConfig c = with_rabi(Scheme::CMCCD, 2.2e6);
  const double f = c.mod_strength / kTwoPi;
  const auto tc = linspace(0.0, 5e-6, 101);
  for (SequenceKind k : {SequenceKind::CcdRabi, SequenceKind::CcdRamsey}) {
    const auto pts = dressed_sequence_experiment(k, c, tc);
    std::vector<double> y;
    for (const auto& p : pts) y.push_back(p.second);
    const auto fit = fit_decaying_sinusoid(tc, y);
    REQUIRE(fit.converged);
    CHECK(fit.frequency == doctest::Approx(f).epsilon(0.005));
    CHECK(fit.t2_unbounded);
  }
  const auto phis = linspace(0.0, 4 * kPi, 81);
  const auto two = dressed_sequence_experiment(SequenceKind::TwoAxis, c, phis);
  for (const auto& [phi, p] : two) CHECK(p == doctest::Approx(0.5 + 0.5 * std::cos(phi)).epsilon(1e-7));
  CHECK(parse_sequence_kind("two-axis") == SequenceKind::TwoAxis);
  CHECK(parse_sequence_kind("ramsey") == SequenceKind::CcdRamsey);
  CHECK_THROWS(dressed_sequence_experiment(SequenceKind::CcdRabi, default_config(Scheme::Bare), tc));
}
