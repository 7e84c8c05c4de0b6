#include "ccd/io/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccd/error.hpp"
#include "ccd/fit.hpp"
#include "ccd/io/config.hpp"
#include "ccd/io/dataset.hpp"
#include "ccd/noise.hpp"
#include "ccd/pulse.hpp"
#include "ccd/rb.hpp"
#include "ccd/sequences.hpp"
#include "ccd/spectrum.hpp"
#include "ccd/sweep.hpp"
#include "ccd/text.hpp"
#include "ccd/trajectory.hpp"

namespace ccd::io {

namespace {

// Flag -> config key. Flags override --set, which overrides --config.
const std::vector<std::pair<std::string, std::string>>& flag_table() {
  static const std::vector<std::pair<std::string, std::string>> t = {
      {"--scheme", "scheme"},
      {"--mw-hz", "mw_hz"},
      {"--detuning-hz", "detuning_hz"},
      {"--rabi-hz", "rabi_hz"},
      {"--rabi-error-hz", "rabi_error_hz"},
      {"--mod-hz", "mod_hz"},
      {"--mod-ratio", "mod_ratio"},
      {"--mod-phase", "mod_phase"},
      {"--mw-phase", "mw_phase"},
      {"--alpha-a", "alpha_A"},
      {"--alpha-p", "alpha_P"},
      {"--error-start-hz", "error_start_hz"},
      {"--error-stop-hz", "error_stop_hz"},
      {"--error-count", "error_count"},
      {"--error-axis", "error_axis"},
      {"--duration-start", "duration_start"},
      {"--duration-stop", "duration_stop"},
      {"--durations", "duration_count"},
      {"--readout", "readout"},
      {"--sequence", "sequence"},
      {"--sweep-start", "sweep_start"},
      {"--sweep-stop", "sweep_stop"},
      {"--sweep-count", "sweep_count"},
      {"--total-angle", "total_angle"},
      {"--samples-per-pi2", "samples_per_pi2"},
      {"--cliffords", "rb_lengths"},
      {"--k", "rb_k"},
      {"--rb-mode", "rb_mode"},
      {"--iq-angle", "iq_angle"},
      {"--iq-rate-hz", "iq_rate_hz"},
      {"--noise-detuning-hz", "noise_detuning_hz"},
      {"--noise-rabi-frac", "noise_rabi_frac"},
      {"--noise-samples", "noise_samples"},
      {"--integrator", "integrator"},
      {"--steps-per-period", "steps_per_period"},
      {"--seed", "seed"},
      {"--threads", "threads"},
      {"--out", "output"},
      {"--format", "format"},
  };
  return t;
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  std::string program_path;
  std::string span;
  bool timestamp = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "key = value run file");
  sub->add_option("--set", args.sets, "override one config key, key=value");
  for (const auto& [flag, key] : flag_table()) sub->add_option(flag, args.flags[key], "config key " + key);
  sub->add_option("--detuning-span-hz,--error-span-hz", args.span,
                  "symmetric error axis: error_start_hz = -X, error_stop_hz = X");
  sub->add_flag("--timestamp", args.timestamp, "record the run time (SOURCE_DATE_EPOCH if set)");
}

RunConfig resolve_config(CLI::App* sub, const CommonArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) cfg = parse_config(read_file(args.config_path));
  for (const auto& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)));
  }
  if (sub->count("--detuning-span-hz") > 0) {
    const double x = parse_number(args.span, 0, 0);
    if (!(x > 0.0)) throw ConfigError("--detuning-span-hz must be > 0");
    cfg.error_start_hz = -x;
    cfg.error_stop_hz = x;
  }
  for (const auto& [flag, key] : flag_table()) {
    if (sub->count(flag) > 0) {
      try {
        apply_setting(cfg, key, args.flags.at(key));
      } catch (const ConfigError& e) {
        throw ConfigError(flag + ": " + e.what());
      }
    }
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("constraint violated: ") + e.what());
  }
  return cfg;
}

std::string run_timestamp(bool requested) {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) return epoch;
  if (!requested) return {};
  const auto now = std::chrono::system_clock::now();
  return std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

std::vector<double> hz_axis(const RunConfig& cfg) {
  return linspace(kTwoPi * cfg.error_start_hz, kTwoPi * cfg.error_stop_hz, static_cast<std::size_t>(cfg.error_count));
}

std::vector<double> durations(const RunConfig& cfg) {
  return linspace(cfg.duration_start, cfg.duration_stop, static_cast<std::size_t>(cfg.duration_count));
}

Axis to_hz(const Axis& a) {
  Axis out{a.name + "_hz", "Hz", a.values};
  for (double& v : out.values) v /= kTwoPi;
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
  return out;
}

// Chevron or Rabi-error grid, noise-averaged when the config asks for it.
SweepGrid error_grid(const RunConfig& cfg, bool detuning_axis) {
  const DriveConfig drive = cfg.drive();
  const auto xs = hz_axis(cfg);
  const auto ts = durations(cfg);
  const RunOptions opts = cfg.run_options();
  auto run = [&](const DriveConfig& d, double offset) {
    std::vector<double> shifted = xs;
    for (double& x : shifted) x += offset;
    return detuning_axis ? chevron_sweep(cfg.scheme, d, shifted, ts, cfg.readout, opts)
                         : rabi_error_sweep(cfg.scheme, d, shifted, ts, cfg.readout, opts);
  };
  SweepGrid grid = run(drive, 0.0);
  const NoiseSpec noise = cfg.noise();
  if (!noise.silent()) {
    // The swept error is absolute, so each shot shifts it by its own offset.
    const auto flat = noise_average(
        [&](const DriveConfig& d) {
          const double offset = detuning_axis ? d.detuning() - drive.detuning() : d.rabi_error - drive.rabi_error;
          const SweepGrid g = run(d, offset);
          return std::vector<double>(g.values.data(), g.values.data() + g.values.size());
        },
        noise, drive, cfg.threads);
    grid.values = Eigen::Map<const Eigen::MatrixXd>(flat.data(), grid.values.rows(), grid.values.cols());
    grid.meta.seed = cfg.seed;
  }
  return grid;
}

void grid_meta(Dataset& ds, const SweepGrid& g) {
  ds.set("scheme", std::string(to_string(g.meta.scheme)));
  ds.set("readout", std::string(to_string(g.meta.readout)));
  ds.set("coarse_grid", g.meta.coarse_grid ? "true" : "false");
}

Dataset cmd_sweep(const RunConfig& cfg, const std::string& name, bool detuning_axis, const std::string& ts) {
  const SweepGrid g = error_grid(cfg, detuning_axis);
  Dataset ds = make_dataset(name, cfg, ts);
  grid_meta(ds, g);
  add_grid(ds, to_hz(g.x), Axis{"duration_s", "s", g.y.values}, g.values, "p_up");
  return ds;
}

Dataset cmd_spectrum(const RunConfig& cfg, const std::string& ts) {
  const bool detuning_axis = cfg.error_axis == ErrorAxis::Detuning;
  const SweepGrid g = error_grid(cfg, detuning_axis);
  const SpectrumGrid s = spectrum(g);
  Dataset ds = make_dataset("spectrum", cfg, ts);
  grid_meta(ds, g);
  std::vector<double> dominant;
  for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(g.values.cols()));
    for (Eigen::Index j = 0; j < g.values.cols(); ++j) row[static_cast<std::size_t>(j)] = g.values(i, j);
    dominant.push_back(dominant_frequency(g.y.values, row));
  }
  ds.set("bin_width_hz", format_number(bin_width(g.y.values)));
  ds.set("dominant_hz", join(dominant));
  add_grid(ds, to_hz(s.x), s.frequency, s.values, "magnitude");
  return ds;
}

Dataset cmd_infidelity(const RunConfig& cfg, const std::string& ts) {
  const auto xs = hz_axis(cfg);
  const auto curve = infidelity_curve(cfg.scheme, cfg.drive(), cfg.error_axis, xs, cfg.run_options());
  Dataset ds = make_dataset("infidelity", cfg, ts);
  ds.set("scheme", std::string(to_string(cfg.scheme)));
  const std::string axis = cfg.error_axis == ErrorAxis::Detuning ? "detuning_hz" : "rabi_error_hz";
  ds.columns = {axis, "infidelity"};
  for (const auto& [x, inf] : curve) ds.rows.push_back({x / kTwoPi, inf});
  return ds;
}

Dataset cmd_trajectory(const RunConfig& cfg, const std::string& ts) {
  const auto rec = bloch_trajectory(cfg.scheme, cfg.drive(), cfg.total_angle, cfg.samples_per_pi2,
                                    cfg.run_options());
  Dataset ds = make_dataset("trajectory", cfg, ts);
  ds.set("scheme", std::string(to_string(cfg.scheme)));
  ds.set("frame", cfg.scheme == Scheme::Bare ? "first" : "second");
  ds.set("spread", format_number(rec.spread));
  ds.columns = {"t_s", "x", "y", "z", "marker"};
  for (std::size_t j = 0; j < rec.samples.size(); ++j) {
    const auto& s = rec.samples[j];
    const bool marker = j > 0 && j % static_cast<std::size_t>(cfg.samples_per_pi2) == 0;
    const double k = marker ? static_cast<double>(j / static_cast<std::size_t>(cfg.samples_per_pi2)) : 0.0;
    ds.rows.push_back({s.t, s.bloch.x, s.bloch.y, s.bloch.z, k});
  }
  return ds;
}

Dataset cmd_dressed(const RunConfig& cfg, const std::string& program_path, const std::string& ts) {
  const DriveConfig drive = cfg.drive();
  Dataset ds = make_dataset("dressed", cfg, ts);
  ds.set("scheme", std::string(to_string(cfg.scheme)));
  if (!program_path.empty()) {
    const std::string text = read_file(program_path);
    const PulseProgram program = parse_program(text, drive);
    const auto compiled = compile(program);
    const NoiseSpec noise = cfg.noise();
    const auto p = noise_average(
        [&](const DriveConfig& d) {
          PulseProgram copy = parse_program(text, d);
          return std::vector<double>{
              simulate(compile(copy), Frame::Second, cfg.run_options().rotating()).population_one()};
        },
        noise, drive, cfg.threads);
    const double ideal = (ideal_action(program) * QubitState::zero()).population_one();
    ds.set("program", text);
    ds.set("program_hash", git_blob_hash(text));
    ds.columns = {"duration_s", "p_up", "ideal_p_up"};
    ds.rows.push_back({compiled.duration(), p.front(), ideal});
    return ds;
  }
  const auto values = linspace(cfg.sweep_start, cfg.sweep_stop, static_cast<std::size_t>(cfg.sweep_count));
  const auto ys = noise_average(
      [&](const DriveConfig& d) {
        const auto r = dressed_sequence_experiment(cfg.sequence, d, values, cfg.run_options());
        std::vector<double> y;
        for (const auto& [x, v] : r) y.push_back(v);
        return y;
      },
      cfg.noise(), drive, cfg.threads);
  ds.set("sequence", std::string(to_string(cfg.sequence)));
  ds.columns = {cfg.sequence == SequenceKind::TwoAxis ? "phi_var_rad" : "t_c_s", "p_up"};
  for (std::size_t i = 0; i < values.size(); ++i) ds.rows.push_back({values[i], ys[i]});
  if (cfg.sequence != SequenceKind::TwoAxis && values.size() >= 16) {
    const double pi_time = kPi / drive.mod_strength;
    const FitResult f = fit_decaying_sinusoid(values, ys, pi_time);
    ds.set("fit_converged", f.converged ? "true" : "false");
    ds.set("fit_frequency_hz", format_number(f.frequency));
    ds.set("fit_t2_s", format_number(f.t2));
    ds.set("fit_t2_unbounded", f.t2_unbounded ? "true" : "false");
    if (f.quality_factor) ds.set("fit_q", format_number(*f.quality_factor));
    if (!f.message.empty()) ds.set("fit_message", f.message);
  }
  return ds;
}

Dataset cmd_rb(const RunConfig& cfg, const std::string& ts) {
  RBOptions o;
  o.lengths = cfg.rb_lengths;
  o.randomizations = cfg.rb_k;
  o.seed = cfg.seed;
  o.mode = cfg.rb_mode;
  o.noise = cfg.noise();
  o.run = cfg.run_options();
  const RBResult r = randomized_benchmarking(cfg.scheme, cfg.drive(), o);
  Dataset ds = make_dataset("rb", cfg, ts);
  ds.set("scheme", std::string(to_string(cfg.scheme)));
  ds.set("k", std::to_string(r.randomizations));
  ds.set("fit_converged", r.converged ? "true" : "false");
  ds.set("amplitude", format_number(r.amplitude));
  ds.set("decay", format_number(r.decay));
  ds.set("clifford_fidelity", format_number(r.clifford_fidelity));
  ds.set("gate_fidelity", format_number(r.gate_fidelity));
  ds.set("fit_residual", format_number(r.fit_residual));
  ds.set("depth_warning", r.depth_warning ? "true" : "false");
  if (!r.message.empty()) ds.set("fit_message", r.message);
  ds.columns = {"length", "signal", "stderr"};
  for (int k = 0; k < r.randomizations; ++k) ds.columns.push_back("seq" + std::to_string(k));
  for (std::size_t i = 0; i < r.lengths.size(); ++i) {
    std::vector<double> row{static_cast<double>(r.lengths[i]), r.signal[i], r.signal_stderr[i]};
    row.insert(row.end(), r.sequence_signals[i].begin(), r.sequence_signals[i].end());
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

Dataset cmd_iq(const RunConfig& cfg, const std::string& program_path, const std::string& ts) {
  const DriveConfig drive = cfg.drive();
  PulseProgram program(drive);
  std::string text;
  if (!program_path.empty()) {
    text = read_file(program_path);
    program = parse_program(text, drive);
  } else if (drive.is_bare()) {
    program.add(rabi_pulse(cfg.iq_angle, cfg.mw_phase, drive));
  } else {
    program.gate(cfg.iq_angle, cfg.mw_phase);
  }
  const auto compiled = compile(program);
  Dataset ds = make_dataset("iq-export", cfg, ts);
  ds.set("scheme", std::string(to_string(cfg.scheme)));
  if (!text.empty()) ds.set("program_hash", git_blob_hash(text));
  ds.set("carrier", "drive = i cos(omega_mw t + phi_mw) - q sin(omega_mw t + phi_mw); phi_mw includes the modulation phase carried across pieces");
  ds.columns = {"t_s", "i", "q", "phi_mw"};
  const double dt = 1.0 / cfg.iq_rate_hz;
  const auto n = static_cast<std::size_t>(std::floor(compiled.duration() / dt + 1e-9)) + 1;
  // Carrier phase offset per piece that keeps the phase-modulation integral
  // continuous from the program start, so the waveform is the one simulated.
  const auto& pieces = compiled.pieces();
  std::vector<double> offsets;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const DriveConfig& c = pieces[k].cfg;
    const double depth = 2.0 * c.alpha_P * c.mod_strength / c.rabi;
    const double now = std::sin(c.rabi * pieces[k].t_begin - c.mod_phase);
    if (k == 0) offsets.push_back(-depth * now);
    else offsets.push_back(offsets.back() + depth * (std::sin(c.rabi * pieces[k].t_begin - pieces[k - 1].cfg.mod_phase) - now));
  }
  for (std::size_t k = 0, piece = 0; k < n; ++k) {
    const double t = compiled.start_time() + static_cast<double>(k) * dt;
    while (piece + 1 < pieces.size() && t >= pieces[piece].t_end) ++piece;
    DriveConfig c = pieces.empty() ? compiled.base() : pieces[piece].cfg;
    if (!pieces.empty()) c.mw_phase -= offsets[piece];
    const IQSample s = iq_baseband(c, t);
    ds.rows.push_back({t, s.i, s.q, c.mw_phase});
  }
  return ds;
}

void error_record(std::ostream& err, std::string_view kind, const std::string& message, int code,
                  std::optional<std::size_t> line = std::nullopt, std::optional<std::size_t> column = std::nullopt) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  if (line && *line > 0) j["line"] = *line;
  if (column && *column > 0) j["column"] = *column;
  err << j.dump() << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator for concatenated continuous driving of a single qubit", "ccdsim"};
  app.require_subcommand(1);
  std::map<std::string, CommonArgs> args;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"chevron", "spin-up fraction versus detuning and drive duration"},
      {"rabi-error", "spin-up fraction versus Rabi error and drive duration"},
      {"spectrum", "Fourier magnitude of a chevron or Rabi-error sweep (error_axis)"},
      {"infidelity", "Y_pi state infidelity versus detuning or Rabi error"},
      {"trajectory", "Bloch trajectory with pi/2 markers"},
      {"dressed", "CCD-Rabi, CCD-Ramsey and two-axis sequences, or --program"},
      {"rb", "randomized benchmarking"},
      {"iq-export", "baseband I/Q samples of a gate or --program"},
      {"selftest", "analytic-oracle checks"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    if (name == "selftest") continue;
    add_common(sub, args[name]);
    if (name == "dressed" || name == "iq-export")
      sub->add_option("--program", args[name].program_path, "pulse program file");
  }

  std::vector<std::string> reversed(argv.rbegin(), argv.rend() - (argv.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, "usage", e.what(), kExitConfig);
    return kExitConfig;
  }

  std::string name;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) name = n;

  try {
    if (name == "selftest") return run_selftest(out) ? kExitOk : kExitNumerical;
    CommonArgs& a = args[name];
    const RunConfig cfg = resolve_config(subs[name], a);
    const std::string ts = run_timestamp(a.timestamp);
    Dataset ds;
    if (name == "chevron") ds = cmd_sweep(cfg, name, true, ts);
    else if (name == "rabi-error") ds = cmd_sweep(cfg, name, false, ts);
    else if (name == "spectrum") ds = cmd_spectrum(cfg, ts);
    else if (name == "infidelity") ds = cmd_infidelity(cfg, ts);
    else if (name == "trajectory") ds = cmd_trajectory(cfg, ts);
    else if (name == "dressed") ds = cmd_dressed(cfg, a.program_path, ts);
    else if (name == "rb") ds = cmd_rb(cfg, ts);
    else if (name == "iq-export") ds = cmd_iq(cfg, a.program_path, ts);
    const std::string bytes = emit_dataset(ds, cfg.format);
    if (cfg.output.empty() || cfg.output == "-") out << bytes;
    else write_file_atomic(cfg.output, bytes);
    return kExitOk;
  } catch (const ConfigError& e) {
    error_record(err, "config", e.what(), kExitConfig, e.line(), e.column());
    return kExitConfig;
  } catch (const CompileError& e) {
    error_record(err, "compile", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const ValidationError& e) {
    error_record(err, "validation", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const IoError& e) {
    error_record(err, "io", e.what(), kExitIo);
    return kExitIo;
  } catch (const IntegratorError& e) {
    error_record(err, "numerical", e.what(), kExitNumerical);
    return kExitNumerical;
  } catch (const std::exception& e) {
    error_record(err, "numerical", e.what(), kExitNumerical);
    return kExitNumerical;
  }
}

int run_command(const std::vector<std::string>& argv) { return run_command(argv, std::cout, std::cerr); }

}  // namespace ccd::io
