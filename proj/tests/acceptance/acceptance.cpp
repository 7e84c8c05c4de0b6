#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccd/drive.hpp"
#include "ccd/fit.hpp"
#include "ccd/io/cli.hpp"
#include "ccd/io/config.hpp"
#include "ccd/io/dataset.hpp"
#include "ccd/parallel.hpp"
#include "ccd/propagator.hpp"
#include "ccd/pulse.hpp"
#include "ccd/random.hpp"
#include "ccd/rb.hpp"
#include "ccd/sequences.hpp"
#include "ccd/spectrum.hpp"
#include "ccd/sweep.hpp"
#include "ccd/text.hpp"
#include "ccd/trajectory.hpp"

using namespace ccd;

namespace {

const Scheme kAll[] = {Scheme::Bare, Scheme::AMCCD, Scheme::PMCCD, Scheme::CMCCD};
const Scheme kCcd[] = {Scheme::AMCCD, Scheme::PMCCD, Scheme::CMCCD};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[FAILED: " << what << "] ";
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

DriveConfig preset(Scheme s, double rabi_hz) {
  DriveConfig c = default_config(s);
  c.rabi = kTwoPi * rabi_hz;
  c.mod_strength = c.rabi / 4;
  return c;
}

std::span<const double> row_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double row_frequency(const SweepGrid& g, Eigen::Index i) {
  const Eigen::VectorXd row = g.values.row(i);
  return dominant_frequency(g.y.values, row_span(row));
}

void criterion1(Outcome& o) {
  const double eps = default_config(Scheme::CMCCD).mod_strength;
  const double cm = counter_rotating_coefficient(default_config(Scheme::CMCCD));
  const double am = counter_rotating_coefficient(default_config(Scheme::AMCCD));
  const double pm = counter_rotating_coefficient(default_config(Scheme::PMCCD));
  o.require(std::abs(cm) <= std::numeric_limits<double>::epsilon() * eps, "CMCCD coefficient zero");
  o.require(am == -eps / 2, "AMCCD = -eps/2");
  o.require(pm == eps / 2, "PMCCD = +eps/2");
  o.detail << "cm=" << cm << " am/eps=" << am / eps << " pm/eps=" << pm / eps;
}

void criterion2(Outcome& o) {
  const int n = 100;
  std::vector<double> infid(n);
  const IntegratorSpec spec = IntegratorSpec::rotating_default();
  parallel_for(n, 0, [&](std::size_t k) {
    KeyedStream rng(2024, {k});
    DriveConfig c = default_config(kAll[k % 4]);
    c.rabi = kTwoPi * (1e6 + 4e6 * rng.uniform());
    c.mod_strength = c.rabi * (0.05 + 0.45 * rng.uniform());
    c.rabi_error = c.rabi * (0.6 * rng.uniform() - 0.3);
    c.mod_phase = kTwoPi * rng.uniform();
    c.mw_phase = kTwoPi * rng.uniform();
    c = c.with_detuning(c.rabi * (rng.uniform() - 0.5));
    const double t = (0.1 + 4.9 * rng.uniform()) * 1e-6;
    const double a = rng.uniform() * kPi, b = rng.uniform() * kTwoPi;
    const QubitState psi0(std::cos(a / 2), std::polar(std::sin(a / 2), b));
    const QubitState first = evolve(make_hamiltonian(c, Frame::First), psi0, 0.0, t, spec);
    const QubitState second = evolve(make_hamiltonian(c, Frame::Second), psi0, 0.0, t, spec);
    infid[k] = 1.0 - state_fidelity(first, second_frame_unitary(c, t) * second);
  });
  const double worst = *std::max_element(infid.begin(), infid.end());
  o.require(worst <= 1e-8, "fidelity >= 1 - 1e-8");
  o.detail << n << " random configs, worst infidelity " << sci(worst);
}

void criterion3(Outcome& o) {
  struct Case {
    double ratio;
    Scheme scheme;
    double angle;
  };
  std::vector<Case> cases;
  for (double ratio : {1e3, 1e4})
    for (Scheme s : kCcd)
      for (double angle : {kPi / 2, kPi, kTwoPi}) cases.push_back({ratio, s, angle});
  std::vector<double> excess(cases.size());
  const auto start = std::chrono::steady_clock::now();
  parallel_for(cases.size(), 0, [&](std::size_t k) {
    const Case& cs = cases[k];
    DriveConfig c = default_config(cs.scheme);
    c.rabi = c.omega_mw / cs.ratio;
    c.mod_strength = c.rabi / 4;
    const double t = cs.angle / c.mod_strength;
    const QubitState lab = evolve(make_hamiltonian(c, Frame::Lab), QubitState::zero(), 0.0, t,
                                  IntegratorSpec::lab_default());
    const QubitState first = evolve(make_hamiltonian(c, Frame::First), QubitState::zero(), 0.0, t,
                                    IntegratorSpec::rotating_default());
    excess[k] = std::abs(lab.population_one() - first.population_one()) / (2.0 / cs.ratio);
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double worst = *std::max_element(excess.begin(), excess.end());
  o.require(worst <= 1.0, "|dP| <= 2 Omega0/omega_mw");
  o.require(secs <= 600.0, "runtime <= 10 min");
  o.detail << cases.size() << " cases, worst |dP|/(2 Omega0/omega_mw) = " << sci(worst) << ", " << sci(secs) << " s";
}

void criterion4(Outcome& o) {
  const DriveConfig c = preset(Scheme::Bare, 3.6e6);
  const auto det = linspace(-2 * c.rabi, 2 * c.rabi, 81);
  const auto g = chevron_sweep(Scheme::Bare, c, det, linspace(0.0, 10e-6, 512));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
    const double expect = std::hypot(c.rabi, det[static_cast<std::size_t>(i)]) / kTwoPi;
    worst = std::max(worst, std::abs(row_frequency(g, i) / expect - 1.0));
  }
  o.require(worst <= 0.01, "within 1%");
  o.detail << "81 detunings over |delta| <= 2 Omega0, worst relative error " << sci(worst);
}

void criterion5(Outcome& o) {
  std::map<Scheme, double> on, off;
  for (Scheme s : kAll) {
    const DriveConfig c = preset(s, 3.6e6);
    const auto curve = infidelity_curve(s, c, ErrorAxis::Detuning, {-0.1 * c.rabi, 0.0, 0.1 * c.rabi});
    on[s] = curve[1].second;
    off[s] = std::max(curve[0].second, curve[2].second);
  }
  const double sb = std::sin(std::sqrt(1.01) * kPi / 2);
  const double bare_oracle = 1.0 - sb * sb / 1.01;
  o.require(on[Scheme::CMCCD] <= 1e-8, "(a) CMCCD <= 1e-8");
  o.require(on[Scheme::AMCCD] > 0 && on[Scheme::PMCCD] > 0, "(b) AM/PM > 0");
  o.require(on[Scheme::AMCCD] > on[Scheme::CMCCD] && on[Scheme::PMCCD] > on[Scheme::CMCCD], "(b) AM/PM > CM");
  o.require(std::abs(off[Scheme::Bare] - bare_oracle) <= 1e-4, "(c) bare matches oracle");
  for (Scheme s : kCcd) o.require(off[s] < off[Scheme::Bare], "(c) " + std::string(to_string(s)) + " < bare");
  o.detail << "on resonance am=" << sci(on[Scheme::AMCCD]) << " pm=" << sci(on[Scheme::PMCCD])
           << " cm=" << sci(on[Scheme::CMCCD]) << "; at 0.1 Omega0 bare=" << sci(off[Scheme::Bare])
           << " (oracle " << sci(bare_oracle) << ") am=" << sci(off[Scheme::AMCCD]) << " pm=" << sci(off[Scheme::PMCCD])
           << " cm=" << sci(off[Scheme::CMCCD]);
}

void criterion6(Outcome& o) {
  std::map<Scheme, double> zero, detuned;
  for (Scheme s : kAll) {
    const DriveConfig c = preset(s, 3.6e6);
    zero[s] = bloch_trajectory(s, c, 20 * kPi, 16).spread;
    detuned[s] = bloch_trajectory(s, c.with_detuning(0.1 * c.rabi), 20 * kPi, 16).spread;
  }
  o.require(zero[Scheme::Bare] <= 1e-8, "(a) bare spread <= 1e-8");
  o.require(zero[Scheme::CMCCD] <= 1e-8, "(a) CMCCD spread <= 1e-8");
  o.require(zero[Scheme::AMCCD] > 0 && zero[Scheme::PMCCD] > 0, "(b) AM/PM spread > 0");
  for (Scheme s : kCcd)
    o.require(detuned[Scheme::Bare] > detuned[s], "(c) bare > " + std::string(to_string(s)) + " at 0.1 Omega0");
  o.detail << "zero error:";
  for (Scheme s : kAll) o.detail << " " << to_string(s) << "=" << sci(zero[s]);
  o.detail << "; delta=0.1 Omega0:";
  for (Scheme s : kAll) o.detail << " " << to_string(s) << "=" << sci(detuned[s]);
}

void criterion7(Outcome& o) {
  const auto dur = linspace(0.0, 10e-6, 512);
  const double bin = bin_width(dur);
  double worst_det = 0.0, worst_rabi = 0.0;
  for (Scheme s : kCcd) {
    const DriveConfig c = preset(s, 3.6e6);
    const auto g = chevron_sweep(s, c, linspace(-0.3 * c.rabi, 0.3 * c.rabi, 25), dur);
    for (Eigen::Index i = 0; i < g.values.rows(); ++i)
      worst_det = std::max(worst_det, std::abs(row_frequency(g, i) - c.mod_strength / kTwoPi) / bin);
    const DriveConfig r = preset(s, 3.3e6);
    const auto h = rabi_error_sweep(s, r, linspace(-0.2 * r.rabi, 0.2 * r.rabi, 17), dur);
    for (Eigen::Index i = 0; i < h.values.rows(); ++i)
      worst_rabi = std::max(worst_rabi, std::abs(row_frequency(h, i) - r.mod_strength / kTwoPi) / bin);
  }
  const DriveConfig b = preset(Scheme::Bare, 3.3e6);
  const auto errs = linspace(-0.2 * b.rabi, 0.2 * b.rabi, 17);
  const auto hb = rabi_error_sweep(Scheme::Bare, b, errs, dur);
  std::vector<double> f(errs.size());
  for (std::size_t i = 0; i < errs.size(); ++i) f[i] = row_frequency(hb, static_cast<Eigen::Index>(i));
  const double mx = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
  const double my = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    sxy += (errs[i] - mx) * (f[i] - my);
    sxx += (errs[i] - mx) * (errs[i] - mx);
  }
  const double slope_ratio = sxy / sxx * kTwoPi;
  o.require(worst_det <= 1.0, "detuning flat band within one bin");
  o.require(worst_rabi <= 1.0, "Rabi-error flat band within one bin");
  o.require(std::abs(slope_ratio - 1.0) <= 0.01, "bare slope 1/2pi within 1%");
  o.detail << "worst offset over |delta| <= 0.3 Omega0: " << sci(worst_det)
           << " bins; over |dOmega| <= 0.2 Omega0: " << sci(worst_rabi) << " bins; bare slope x 2pi = "
           << slope_ratio;
}

void criterion8(Outcome& o) {
  const DriveConfig c = preset(Scheme::CMCCD, 2.2e6);
  const double f0 = c.mod_strength / kTwoPi;
  const auto tc = linspace(0.0, 5e-6, 101);
  for (SequenceKind k : {SequenceKind::CcdRabi, SequenceKind::CcdRamsey}) {
    std::vector<double> y;
    for (const auto& p : dressed_sequence_experiment(k, c, tc)) y.push_back(p.second);
    const auto fit = fit_decaying_sinusoid(tc, y);
    const double rel = fit.converged ? std::abs(fit.frequency / f0 - 1.0) : 1.0;
    o.require(fit.converged && rel <= 0.005, std::string(to_string(k)) + " frequency within 0.5%");
    o.detail << to_string(k) << " f/f_eps-1=" << sci(fit.frequency / f0 - 1.0) << "; ";
  }
  const auto phis = linspace(0.0, 4 * kPi, 81);
  const auto pts = dressed_sequence_experiment(SequenceKind::TwoAxis, c, phis);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = std::cos(pts[i].first);
    a(r, 1) = std::sin(pts[i].first);
    a(r, 2) = 1.0;
    y(r) = pts[i].second;
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(y);
  const double ss_res = (y - a * x).squaredNorm();
  const double ss_tot = (y.array() - y.mean()).matrix().squaredNorm();
  const double r2 = 1.0 - ss_res / ss_tot;
  o.require(r2 >= 0.999, "two-axis R^2 >= 0.999");
  o.detail << "two-axis R^2=" << r2;
}

void criterion9(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  RBOptions opt;
  opt.seed = 7;
  opt.mode = RBMode::IdealMatrices;
  const auto ideal = randomized_benchmarking(Scheme::CMCCD, preset(Scheme::CMCCD, 2.2e6), opt);
  o.require(std::abs(ideal.clifford_fidelity - 1.0) <= 1e-12, "(a) ideal F_c = 1");
  opt.mode = RBMode::PulseLevel;
  std::map<Scheme, double> f0, f1;
  for (Scheme s : kAll) {
    const DriveConfig c = preset(s, 2.2e6);
    f0[s] = randomized_benchmarking(s, c, opt).gate_fidelity;
    f1[s] = randomized_benchmarking(s, c.with_detuning(0.05 * c.rabi), opt).gate_fidelity;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(f0[Scheme::CMCCD] >= 0.99999, "(b) CMCCD F >= 0.99999");
  auto drop = [&](Scheme s) { return 1.0 - f1[s] / f0[s]; };
  for (Scheme s : kCcd) o.require(drop(s) < drop(Scheme::Bare), "(c) " + std::string(to_string(s)) + " drop < bare");
  o.require(secs <= 900.0, "runtime <= 15 min");
  o.detail << "ideal F_c=" << ideal.clifford_fidelity << "; F(0):";
  for (Scheme s : kAll) o.detail << " " << to_string(s) << "=" << f0[s];
  o.detail << "; drop at 0.05 Omega0:";
  for (Scheme s : kAll) o.detail << " " << to_string(s) << "=" << sci(drop(s));
  o.detail << "; " << sci(secs) << " s";
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ccdsim");
  std::ostringstream out, err;
  if (io::run_command(args, out, err) != 0) throw std::runtime_error("cli failed: " + err.str());
  return out.str();
}

void criterion10(Outcome& o) {
  struct Preset {
    Scheme scheme;
    double rabi_hz;
    ErrorAxis axis;
    double error;
  };
  std::vector<Preset> presets;
  for (Scheme s : kAll) {
    presets.push_back({s, 3.6e6, ErrorAxis::Detuning, 0.0});
    presets.push_back({s, 3.6e6, ErrorAxis::Detuning, 0.3});
    presets.push_back({s, 3.3e6, ErrorAxis::Rabi, 0.2});
    presets.push_back({s, 2.2e6, ErrorAxis::Detuning, 0.05});
  }
  const std::size_t n = presets.size() * 2;
  std::vector<double> unitarity(n), drift(n), halving(n);
  const IntegratorSpec spec = IntegratorSpec::rotating_default();
  parallel_for(n, 0, [&](std::size_t k) {
    const Preset& p = presets[k / 2];
    const Frame frame = (k % 2) ? Frame::Second : Frame::First;
    DriveConfig c = preset(p.scheme, p.rabi_hz);
    if (p.axis == ErrorAxis::Detuning) c = c.with_detuning(p.error * c.rabi);
    else c.rabi_error = p.error * c.rabi;
    const auto h = make_hamiltonian(c, frame);
    const double t = 10e-6;
    unitarity[k] = propagator_unitary(h, 0.0, t, spec).unitarity_defect();
    drift[k] = std::abs(evolve(h, QubitState::zero(), 0.0, t, spec).norm_squared() - 1.0);
    halving[k] = step_halving_error(h, QubitState::zero(), 0.0, t, spec);
  });
  const double wu = *std::max_element(unitarity.begin(), unitarity.end());
  const double wd = *std::max_element(drift.begin(), drift.end());
  const double wh = *std::max_element(halving.begin(), halving.end());
  o.require(wu <= 1e-10, "unitarity <= 1e-10");
  o.require(wd <= 1e-10, "norm drift <= 1e-10");
  o.require(wh <= 1e-8, "step halving <= 1e-8");

  const std::vector<std::vector<std::string>> commands = {
      {"chevron", "--scheme", "pm", "--error-count", "9", "--durations", "64", "--noise-detuning-hz", "1e5",
       "--noise-samples", "4", "--seed", "3"},
      {"rb", "--scheme", "cm", "--rabi-hz", "2.2e6", "--cliffords", "1,2,4,...,16", "--k", "4", "--seed", "7",
       "--noise-detuning-hz", "5e4", "--noise-samples", "3"},
      {"dressed", "--sequence", "ramsey", "--rabi-hz", "2.2e6", "--sweep-count", "41", "--noise-detuning-hz", "1e5",
       "--noise-samples", "5", "--seed", "11"},
      {"infidelity", "--scheme", "am", "--error-count", "11", "--format", "json"},
  };
  bool identical = true;
  for (const auto& cmd : commands) {
    auto one = cmd, many = cmd;
    one.insert(one.end(), {"--threads", "1"});
    many.insert(many.end(), {"--threads", "8"});
    const std::string a = run_cli(one), b = run_cli(many), c = run_cli(many);
    identical = identical && a == b && b == c;
  }
  o.require(identical, "byte-identical outputs for 1 and 8 workers");
  o.detail << presets.size() << " presets x 2 frames over 10 us: unitarity " << sci(wu) << ", norm drift " << sci(wd)
           << ", step halving " << sci(wh) << "; " << commands.size() << " CLI datasets "
           << (identical ? "byte-identical" : "differ") << " across worker counts";
}

void criterion11(Outcome& o) {
  double worst = 0.0;
  std::size_t points = 0;
  for (Scheme s : kAll) {
    const DriveConfig d = preset(s, 3.6e6);
    const double duration = s == Scheme::Bare ? kPi / d.rabi : kPi / d.mod_strength;
    const double rate = 9999.0 / duration * (1.0 + 1e-12);
    const std::string csv = run_cli({"iq-export", "--scheme", std::string(to_string(s)), "--rabi-error-hz", "1.5e5",
                                     "--mw-phase", "0.3", "--iq-rate-hz", format_number(rate)});
    const io::Dataset ds = io::parse_csv(csv);
    const DriveConfig base = io::parse_config(ds.get("config")).drive();
    points = std::max(points, ds.rows.size());
    for (const auto& row : ds.rows) {
      DriveConfig c = base;
      c.mw_phase = row[3];
      const IQSample sample{row[0], row[1], row[2]};
      const double ref = lab_drive_coefficient(c, row[0]);
      worst = std::max(worst, std::abs(sample.reconstruct(c) - ref) / (c.rabi + c.rabi_error));
    }
    if (ds.rows.size() < 10000) o.require(false, std::string(to_string(s)) + " grid has 1e4 points");
  }
  o.require(worst <= 1e-10, "relative error <= 1e-10");
  o.detail << "4 schemes x " << points << " exported samples, worst relative error " << sci(worst);
}

const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> kCriteria = {
    {"counter-rotating cancellation", criterion1},
    {"exact frame equivalence", criterion2},
    {"first rotating-wave approximation", criterion3},
    {"bare chevron law", criterion4},
    {"Y_pi infidelity ordering", criterion5},
    {"Bloch trajectory marker spread", criterion6},
    {"flat-band robustness", criterion7},
    {"dressed-sequence presets", criterion8},
    {"randomized benchmarking", criterion9},
    {"numerical hygiene and determinism", criterion10},
    {"I/Q round trip", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) selected.push_back(i);
  bool all = true;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(kCriteria.size())) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const auto& [name, fn] = kCriteria[static_cast<std::size_t>(id - 1)];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << " " << name << ": " << o.detail.str()
              << " (" << sci(secs) << " s)" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
