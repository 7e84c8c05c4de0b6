#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "ccd/drive.hpp"
#include "ccd/error.hpp"
#include "ccd/propagator.hpp"
#include "ccd/pulse.hpp"
#include "ccd/io/cli.hpp"
#include "ccd/io/config.hpp"
#include "ccd/io/dataset.hpp"
#include "ccd/text.hpp"

using namespace ccd;
using namespace ccd::io;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ccdsim");
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("ccdsim_unit_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("number and angle text") {
  CHECK(parse_number("1e-6", 1) == 1e-6);
  CHECK(parse_number("+2.5", 1) == 2.5);
  CHECK_THROWS_AS(parse_number("2.5x", 3, 7), ConfigError);
  CHECK(parse_angle("pi/2", 1) == doctest::Approx(kPi / 2));
  CHECK(parse_angle("-pi", 1) == doctest::Approx(-kPi));
  CHECK(parse_angle("1.5pi", 1) == doctest::Approx(1.5 * kPi));
  CHECK(parse_angle("3pi/4", 1) == doctest::Approx(0.75 * kPi));
  for (double v : {0.1, 1e-300, 3.6e6, kPi, -2.0 / 3.0}) CHECK(parse_number(format_number(v), 1) == v);
  CHECK(trim("  a b \t") == "a b");
}

TEST_CASE("config parsing") {
  const RunConfig d = parse_config("");
  CHECK(d == RunConfig{});
  const RunConfig c = parse_config("scheme = cm\nrabi_hz = 3.6e6\nmod_ratio = 0.25 # quarter\n");
  const DriveConfig drive = c.drive();
  CHECK(c.scheme == Scheme::CMCCD);
  CHECK(drive.mod_strength == doctest::Approx(drive.rabi / 4));
  CHECK(drive.rabi == doctest::Approx(kTwoPi * 3.6e6));
  CHECK(drive.alpha_A == 0.5);

  const RunConfig det = parse_config("detuning_hz = 1e6\n");
  CHECK(det.drive().detuning() == doctest::Approx(kTwoPi * 1e6));

  CHECK_THROWS_AS(parse_config("alpha_A = 0.7\nalpha_P = 0.7\n"), ConfigError);
  try {
    parse_config("# header\n  bogus_key = 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  try {
    parse_config("rabi_hz = 1e6\nrabi_hz = 2e6\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_config("rabi_hz = fast\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 11);
  }
  CHECK_THROWS_AS(parse_config("rabi_hz\n"), ConfigError);
}

TEST_CASE("config round trip") {
  const std::string text =
      "scheme = pm\nrabi_hz = 2.2e6\nmod_hz = 0.55e6\ndetuning_hz = -1.25e5\nrb_lengths = 1,2,4,...,64\n"
      "alpha_A = 0.25\nalpha_P = 0.75\nnoise_detuning_hz = 1e5\nnoise_samples = 20\nseed = 99\nformat = json\n"
      "sequence = ramsey\nmw_phase = pi/3\n";
  const RunConfig a = parse_config(text);
  const std::string emitted = emit_config(a);
  const RunConfig b = parse_config(emitted);
  CHECK(a == b);
  CHECK(emit_config(b) == emitted);
  CHECK(parse_config(emit_config(RunConfig{})) == RunConfig{});
}

TEST_CASE("integer lists") {
  CHECK(parse_int_list("1,2,4,...,64") == std::vector<int>{1, 2, 4, 8, 16, 32, 64});
  CHECK(parse_int_list("5,10,15,...,30") == std::vector<int>{5, 10, 15, 20, 25, 30});
  CHECK(parse_int_list("3, 7") == std::vector<int>{3, 7});
  CHECK_THROWS(parse_int_list("1,x"));
}

TEST_CASE("git blob hash") {
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("dataset emission") {
  Dataset ds = make_dataset("chevron", RunConfig{});
  CHECK(ds.get("tool") == "ccdsim");
  CHECK(ds.get("config_hash") == git_blob_hash(emit_config(RunConfig{})));
  CHECK(ds.get("timestamp").empty());
  const Axis x{"detuning_hz", "Hz", {-1.0, 1.0}};
  const Axis y{"duration_s", "s", {0.0, 1e-6}};
  Eigen::MatrixXd v(2, 2);
  v << 0.0, 0.25, 0.5, 1.0;
  add_grid(ds, x, y, v, "p_up");
  REQUIRE(ds.rows.size() == 4);
  CHECK(ds.columns == std::vector<std::string>{"detuning_hz", "duration_s", "p_up"});
  CHECK(ds.rows[1] == std::vector<double>{-1.0, 1e-6, 0.25});

  const std::string csv = emit_csv(ds);
  const Dataset back = parse_csv(csv);
  CHECK(back.meta == ds.meta);
  CHECK(back.columns == ds.columns);
  CHECK(back.rows == ds.rows);
  CHECK(emit_csv(ds) == csv);

  const auto j = nlohmann::json::parse(emit_json(ds));
  CHECK(j["values"]["rows"].size() == 4);
  CHECK(j["axes"][0]["name"] == "detuning_hz");
  CHECK(j["meta"]["command"] == "chevron");
}

TEST_CASE("atomic writes") {
  const fs::path dir = scratch_dir();
  const std::string path = (dir / "a.csv").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(read_file(path) == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "b.csv").string(), "x"), IoError);
  CHECK_THROWS_AS(read_file((dir / "nope").string()), IoError);
  fs::remove_all(dir);
}

TEST_CASE("cli: outputs are byte-identical across runs and worker counts") {
  const std::vector<std::string> base{"chevron", "--scheme", "pm", "--error-span-hz", "4e6", "--error-count", "5",
                                      "--durations", "32", "--duration-stop", "2e-6"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return cli(a);
  };
  const Run a = with({"--threads", "1"});
  const Run b = with({"--threads", "4"});
  const Run c = with({"--threads", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
  CHECK(parse_csv(a.out).rows.size() == 5 * 32);

  const Run rb1 = cli({"rb", "--scheme", "cm", "--cliffords", "1,2,4", "--k", "3", "--seed", "7", "--threads", "1",
                       "--noise-detuning-hz", "2e4", "--noise-samples", "3"});
  const Run rb2 = cli({"rb", "--scheme", "cm", "--cliffords", "1,2,4", "--k", "3", "--seed", "7", "--threads", "3",
                       "--noise-detuning-hz", "2e4", "--noise-samples", "3"});
  REQUIRE(rb1.code == 0);
  CHECK(rb1.out == rb2.out);
}

TEST_CASE("cli: commands and exit codes") {
  CHECK(cli({"selftest"}).code == kExitOk);
  const Run spec = cli({"chevron", "--scheme", "bare", "--rabi-hz", "3.6e6", "--detuning-span-hz", "8e6",
                        "--durations", "64", "--format", "json"});
  REQUIRE(spec.code == 0);
  CHECK(nlohmann::json::parse(spec.out)["meta"]["command"] == "chevron");

  const Run bad = cli({"chevron", "--set", "alpha_A=0.7", "--set", "alpha_P=0.7"});
  CHECK(bad.code == kExitConfig);
  const auto rec = nlohmann::json::parse(bad.err.substr(bad.err.find('{')));
  CHECK(rec["exit_code"] == kExitConfig);
  CHECK(cli({"nonsense"}).code == kExitConfig);
  CHECK(cli({"chevron", "--rabi-hz", "abc"}).code == kExitConfig);
  CHECK(cli({"chevron", "--config", "/nonexistent/run.cfg"}).code == kExitIo);
  CHECK(cli({"chevron", "--durations", "8", "--out", "/nonexistent/dir/c.csv"}).code == kExitIo);
  CHECK(cli({"rb", "--scheme", "cm", "--set", "mod_ratio=0.2", "--cliffords", "1", "--k", "1"}).code == kExitConfig);

  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "run.cfg";
  write_file_atomic(cfg.string(), "scheme = am\nrabi_hz = 2e6\n");
  const Run withcfg = cli({"iq-export", "--config", cfg.string(), "--rabi-hz", "2.2e6"});
  REQUIRE(withcfg.code == 0);
  const Dataset iq = parse_csv(withcfg.out);
  CHECK(iq.columns == std::vector<std::string>{"t_s", "i", "q", "phi_mw"});
  const RunConfig used = parse_config(iq.get("config"));
  CHECK(used.scheme == Scheme::AMCCD);
  CHECK(used.rabi_hz == 2.2e6);

  const fs::path outp = dir / "t.csv";
  CHECK(cli({"trajectory", "--scheme", "cm", "--out", outp.string()}).code == 0);
  CHECK(fs::exists(outp));
  fs::remove_all(dir);
}

TEST_CASE("exported I/Q waveform drives the simulated dynamics") {
  for (const char* scheme : {"pm", "cm", "am"}) {
    const fs::path dir = scratch_dir();
    const fs::path prog = dir / "ramsey.pulse";
    write_file_atomic(prog.string(), "gate pi/2\nidle 3.3e-7\ngate pi/2\npad\n");
    const Run r = cli({"iq-export", "--scheme", scheme, "--mw-hz", "3.6e9", "--program", prog.string()});
    fs::remove_all(dir);
    REQUIRE(r.code == 0);
    const Dataset ds = parse_csv(r.out);
    const DriveConfig cfg = parse_config(ds.get("config")).drive();
    const auto compiled = compile(parse_program("gate pi/2\nidle 3.3e-7\ngate pi/2\npad\n", cfg));

    std::vector<DriveConfig> piece_cfg;
    for (const auto& p : compiled.pieces()) {
      DriveConfig c = p.cfg;
      for (const auto& row : ds.rows) {
        if (row[0] >= p.t_begin && row[0] < p.t_end) {
          c.mw_phase = row[3];
          break;
        }
      }
      piece_cfg.push_back(c);
    }
    TimeDependentHamiltonian lab{[&](double t) {
                                   std::size_t k = 0;
                                   while (k + 1 < piece_cfg.size() && t >= compiled.pieces()[k].t_end) ++k;
                                   return Hamiltonian{lab_drive_coefficient(piece_cfg[k], t), 0.0, cfg.omega_L / 2};
                                 },
                                 cfg.omega_mw};
    const double p_lab = evolve(lab, QubitState::zero(), 0.0, compiled.end_time(), IntegratorSpec::lab_default())
                             .population_one();
    const double p_sim = simulate(compiled, Frame::First, IntegratorSpec::rotating_default()).population_one();
    INFO(std::string(scheme) << ": lab " << p_lab << " simulated " << p_sim);
    CHECK(std::abs(p_lab - p_sim) <= 2.0 * cfg.rabi / cfg.omega_mw);
  }
}
