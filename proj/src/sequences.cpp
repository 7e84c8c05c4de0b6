#include "ccd/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ccd/error.hpp"
#include "ccd/parallel.hpp"

namespace ccd {

std::string_view to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::CcdRabi: return "ccd_rabi";
    case SequenceKind::CcdRamsey: return "ccd_ramsey";
    case SequenceKind::TwoAxis: return "two_axis";
  }
  return "?";
}

SequenceKind parse_sequence_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
  if (s == "ccd_rabi" || s == "rabi") return SequenceKind::CcdRabi;
  if (s == "ccd_ramsey" || s == "ramsey") return SequenceKind::CcdRamsey;
  if (s == "two_axis") return SequenceKind::TwoAxis;
  throw ValidationError("unknown sequence kind '" + std::string(name) + "'");
}

PulseProgram dressed_program(SequenceKind kind, const DriveConfig& cfg, double value) {
  if (cfg.is_bare()) throw ValidationError("dressed sequences need a CCD scheme");
  PulseProgram program(cfg);
  switch (kind) {
    case SequenceKind::CcdRabi:
      if (!(value >= 0.0)) throw ValidationError("ccd_rabi: t_c must be >= 0");
      program.add({SegmentKind::Gate, value, kPi / 2.0, 0.0, "gate(t_c)"});
      break;
    case SequenceKind::CcdRamsey:
      program.gate(kPi / 2.0, 0.0).idle(value).gate(kPi / 2.0, 0.0);
      break;
    case SequenceKind::TwoAxis:
      program.gate(kPi / 2.0, 0.0).gate(kPi / 2.0, value);
      break;
  }
  program.pad();
  return program;
}

std::vector<std::pair<double, double>> dressed_sequence_experiment(SequenceKind kind, const DriveConfig& cfg,
                                                                   const std::vector<double>& values,
                                                                   const RunOptions& opts) {
  cfg.validate();
  const IntegratorSpec spec = opts.rotating();
  std::vector<std::pair<double, double>> out(values.size());
  parallel_for(values.size(), opts.threads, [&](std::size_t i) {
    const auto compiled = compile(dressed_program(kind, cfg, values[i]));
    const QubitState psi = simulate(compiled, Frame::Second, spec);
    out[i] = {values[i], std::clamp(psi.population_one(), 0.0, 1.0)};
  });
  return out;
}

}  // namespace ccd
