#include "ccd/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>

#include "ccd/error.hpp"
#include "ccd/text.hpp"

namespace ccd::io {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

long long parse_integer(std::string_view tok, std::size_t line, std::size_t column) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ConfigError(line, column, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

int parse_int(std::string_view tok, std::size_t line, std::size_t column) {
  const long long v = parse_integer(tok, line, column);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(line, column, "integer out of range");
  return static_cast<int>(v);
}

struct Key {
  std::string_view name;
  std::function<void(RunConfig&, std::string_view, std::size_t, std::size_t)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
std::function<std::optional<std::string>(const RunConfig&)> number(T RunConfig::*field) {
  return [field](const RunConfig& c) -> std::optional<std::string> {
    if constexpr (std::is_floating_point_v<T>) return format_number(c.*field);
    else return std::to_string(c.*field);
  };
}

auto real_setter(double RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
    c.*field = parse_number(v, l, col);
  };
}

auto angle_setter(double RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
    c.*field = parse_angle(v, l, col);
  };
}

auto int_setter(int RunConfig::*field) {
  return [field](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
    c.*field = parse_int(v, l, col);
  };
}

auto optional_real(std::optional<double> RunConfig::*field) {
  return Key{"",
             [field](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
               c.*field = parse_number(v, l, col);
             },
             [field](const RunConfig& c) -> std::optional<std::string> {
               if (!(c.*field)) return std::nullopt;
               return format_number(*(c.*field));
             }};
}

template <class E>
E choose(std::string_view v, std::initializer_list<std::pair<std::string_view, E>> options, std::size_t l,
         std::size_t col) {
  const std::string s = lower(v);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? std::string(name) : ", " + std::string(name);
  }
  throw ConfigError(l, col, "expected one of {" + names + "}, got '" + std::string(v) + "'");
}

std::string_view method_name(Method m) { return m == Method::CommutatorFree4 ? "cf4" : "midpoint"; }
std::string_view axis_name(ErrorAxis a) { return a == ErrorAxis::Detuning ? "detuning" : "rabi"; }
std::string_view mode_name(RBMode m) { return m == RBMode::PulseLevel ? "pulse" : "ideal"; }

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back({"scheme",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   try {
                     c.scheme = parse_scheme(v);
                   } catch (const ValidationError& e) {
                     throw ConfigError(l, col, e.what());
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.scheme)); }});
    k.push_back({"mw_hz", real_setter(&RunConfig::mw_hz), number(&RunConfig::mw_hz)});
    k.push_back({"detuning_hz", real_setter(&RunConfig::detuning_hz), number(&RunConfig::detuning_hz)});
    k.push_back({"rabi_hz", real_setter(&RunConfig::rabi_hz), number(&RunConfig::rabi_hz)});
    k.push_back({"rabi_error_hz", real_setter(&RunConfig::rabi_error_hz), number(&RunConfig::rabi_error_hz)});
    auto mod = optional_real(&RunConfig::mod_hz);
    mod.name = "mod_hz";
    k.push_back(mod);
    k.push_back({"mod_ratio", real_setter(&RunConfig::mod_ratio), number(&RunConfig::mod_ratio)});
    k.push_back({"mod_phase", angle_setter(&RunConfig::mod_phase), number(&RunConfig::mod_phase)});
    k.push_back({"mw_phase", angle_setter(&RunConfig::mw_phase), number(&RunConfig::mw_phase)});
    auto aa = optional_real(&RunConfig::alpha_A);
    aa.name = "alpha_A";
    k.push_back(aa);
    auto ap = optional_real(&RunConfig::alpha_P);
    ap.name = "alpha_P";
    k.push_back(ap);

    k.push_back({"error_start_hz", real_setter(&RunConfig::error_start_hz), number(&RunConfig::error_start_hz)});
    k.push_back({"error_stop_hz", real_setter(&RunConfig::error_stop_hz), number(&RunConfig::error_stop_hz)});
    k.push_back({"error_count", int_setter(&RunConfig::error_count), number(&RunConfig::error_count)});
    k.push_back({"error_axis",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   c.error_axis = choose<ErrorAxis>(v, {{"detuning", ErrorAxis::Detuning}, {"rabi", ErrorAxis::Rabi}},
                                                    l, col);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(axis_name(c.error_axis)); }});
    k.push_back({"duration_start", real_setter(&RunConfig::duration_start), number(&RunConfig::duration_start)});
    k.push_back({"duration_stop", real_setter(&RunConfig::duration_stop), number(&RunConfig::duration_stop)});
    k.push_back({"duration_count", int_setter(&RunConfig::duration_count), number(&RunConfig::duration_count)});
    k.push_back({"readout",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   c.readout = choose<Readout>(
                       v, {{"auto", Readout::Auto}, {"raw", Readout::Raw}, {"matched", Readout::Matched}}, l, col);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.readout)); }});

    k.push_back({"sequence",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   try {
                     c.sequence = parse_sequence_kind(v);
                   } catch (const ValidationError& e) {
                     throw ConfigError(l, col, e.what());
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.sequence)); }});
    k.push_back({"sweep_start", angle_setter(&RunConfig::sweep_start), number(&RunConfig::sweep_start)});
    k.push_back({"sweep_stop", angle_setter(&RunConfig::sweep_stop), number(&RunConfig::sweep_stop)});
    k.push_back({"sweep_count", int_setter(&RunConfig::sweep_count), number(&RunConfig::sweep_count)});
    k.push_back({"total_angle", angle_setter(&RunConfig::total_angle), number(&RunConfig::total_angle)});
    k.push_back({"samples_per_pi2", int_setter(&RunConfig::samples_per_pi2), number(&RunConfig::samples_per_pi2)});

    k.push_back({"rb_lengths",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   try {
                     c.rb_lengths = parse_int_list(v);
                   } catch (const ConfigError& e) {
                     throw ConfigError(l, col, e.what());
                   }
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return join_ints(c.rb_lengths); }});
    k.push_back({"rb_k", int_setter(&RunConfig::rb_k), number(&RunConfig::rb_k)});
    k.push_back({"rb_mode",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   c.rb_mode = choose<RBMode>(v, {{"pulse", RBMode::PulseLevel}, {"ideal", RBMode::IdealMatrices}}, l,
                                              col);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(mode_name(c.rb_mode)); }});
    k.push_back({"iq_angle", angle_setter(&RunConfig::iq_angle), number(&RunConfig::iq_angle)});
    k.push_back({"iq_rate_hz", real_setter(&RunConfig::iq_rate_hz), number(&RunConfig::iq_rate_hz)});

    k.push_back({"noise_detuning_hz", real_setter(&RunConfig::noise_detuning_hz),
                 number(&RunConfig::noise_detuning_hz)});
    k.push_back({"noise_rabi_frac", real_setter(&RunConfig::noise_rabi_frac), number(&RunConfig::noise_rabi_frac)});
    k.push_back({"noise_samples", int_setter(&RunConfig::noise_samples), number(&RunConfig::noise_samples)});

    k.push_back({"integrator",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   c.integrator = choose<Method>(
                       v, {{"cf4", Method::CommutatorFree4}, {"midpoint", Method::ExponentialMidpoint}}, l, col);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   return std::string(method_name(c.integrator));
                 }});
    k.push_back({"steps_per_period", int_setter(&RunConfig::steps_per_period), number(&RunConfig::steps_per_period)});
    k.push_back({"seed",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   std::uint64_t s = 0;
                   const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
                   if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
                     throw ConfigError(l, col, "expected an unsigned 64-bit seed, got '" + std::string(v) + "'");
                   c.seed = s;
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }});
    k.push_back({"threads",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   const long long n = parse_integer(v, l, col);
                   if (n < 0 || n > 4096) throw ConfigError(l, col, "threads must be in [0, 4096]");
                   c.threads = static_cast<unsigned>(n);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.threads); }});
    k.push_back({"output", [](RunConfig& c, std::string_view v, std::size_t, std::size_t) { c.output = v; },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (c.output.empty()) return std::nullopt;
                   return c.output;
                 }});
    k.push_back({"format",
                 [](RunConfig& c, std::string_view v, std::size_t l, std::size_t col) {
                   c.format = choose<Format>(v, {{"csv", Format::Csv}, {"json", Format::Json}}, l, col);
                 },
                 [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.format)); }});
    return k;
  }();
  return table;
}

}  // namespace

std::string_view to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

DriveConfig RunConfig::drive() const {
  DriveConfig d = default_config(scheme);
  d.omega_mw = kTwoPi * mw_hz;
  d.omega_L = d.omega_mw + kTwoPi * detuning_hz;
  d.rabi = kTwoPi * rabi_hz;
  d.rabi_error = kTwoPi * rabi_error_hz;
  d.mod_strength = mod_hz ? kTwoPi * *mod_hz : mod_ratio * d.rabi;
  d.mod_phase = mod_phase;
  d.mw_phase = mw_phase;
  if (alpha_A) d.alpha_A = *alpha_A;
  if (alpha_P) d.alpha_P = *alpha_P;
  return d;
}

NoiseSpec RunConfig::noise() const {
  return {kTwoPi * noise_detuning_hz, noise_rabi_frac, noise_samples, seed};
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.threads = threads;
  IntegratorSpec spec = IntegratorSpec::rotating_default();
  spec.method = integrator;
  spec.steps_per_fastest_period = steps_per_period;
  o.integrator = spec;
  return o;
}

void RunConfig::validate() const {
  drive().validate();
  noise().validate();
  if (mod_ratio < 0.0) throw ValidationError("mod_ratio must be >= 0");
  if (mod_hz && *mod_hz < 0.0) throw ValidationError("mod_hz must be >= 0");
  if (error_count < 1) throw ValidationError("error_count must be >= 1");
  if (error_count > 1 && !(error_stop_hz > error_start_hz))
    throw ValidationError("error_stop_hz must exceed error_start_hz");
  if (duration_count < 2) throw ValidationError("duration_count must be >= 2");
  if (duration_start < 0.0 || !(duration_stop > duration_start))
    throw ValidationError("durations need 0 <= duration_start < duration_stop");
  if (sweep_count < 1) throw ValidationError("sweep_count must be >= 1");
  if (sweep_count > 1 && !(sweep_stop > sweep_start)) throw ValidationError("sweep_stop must exceed sweep_start");
  if (!(total_angle > 0.0)) throw ValidationError("total_angle must be > 0");
  if (samples_per_pi2 < 1) throw ValidationError("samples_per_pi2 must be >= 1");
  if (rb_lengths.empty()) throw ValidationError("rb_lengths is empty");
  for (std::size_t i = 0; i < rb_lengths.size(); ++i) {
    if (rb_lengths[i] < 1) throw ValidationError("rb_lengths must be positive");
    if (i > 0 && rb_lengths[i] <= rb_lengths[i - 1]) throw ValidationError("rb_lengths must be ascending");
  }
  if (rb_k < 1) throw ValidationError("rb_k must be >= 1");
  if (!(iq_angle > 0.0)) throw ValidationError("iq_angle must be > 0");
  if (!(iq_rate_hz > 0.0)) throw ValidationError("iq_rate_hz must be > 0");
  if (steps_per_period < 40) throw ValidationError("steps_per_period must be >= 40");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, std::size_t line,
                   std::size_t column) {
  for (const auto& k : keys()) {
    if (k.name == key) {
      k.set(cfg, value, line, column);
      return;
    }
  }
  throw ConfigError(line, column, "unknown key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    const std::string_view body = raw.substr(0, raw.find('#'));
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    const std::size_t indent = body.find_first_not_of(" \t") + 1;
    if (eq == std::string_view::npos) throw ConfigError(line_no, indent, "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, indent, "missing key before '='");
    const std::size_t value_col = eq + 2 + (body.substr(eq + 1).find_first_not_of(" \t") == std::string_view::npos
                                                ? 0
                                                : body.substr(eq + 1).find_first_not_of(" \t"));
    if (value.empty()) throw ConfigError(line_no, eq + 2, "missing value for '" + key + "'");
    const bool known = std::any_of(keys().begin(), keys().end(), [&](const Key& k) { return k.name == key; });
    if (!known) throw ConfigError(line_no, indent, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(line_no, indent, "duplicate key '" + key + "'");
    apply_setting(cfg, key, value, line_no, value_col);
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("constraint violated: ") + e.what());
  }
  return cfg;
}

std::string emit_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& k : keys()) {
    if (auto v = k.get(cfg)) out << k.name << " = " << *v << "\n";
  }
  return out.str();
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    tokens.push_back(trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t != "...") {
      if (t.empty()) throw ConfigError("empty entry in list '" + std::string(text) + "'");
      out.push_back(parse_int(t, 0, 0));
      continue;
    }
    if (out.size() < 2 || i + 1 >= tokens.size() || tokens[i + 1] == "...")
      throw ConfigError("'...' needs two values before it and one after it");
    const long long end = parse_int(tokens[i + 1], 0, 0);
    const long long a = out[out.size() - 2], b = out.back();
    bool geometric = false;
    long long ratio = 0;
    if (out.size() >= 3) {
      const long long z = out[out.size() - 3];
      geometric = z != 0 && a % z == 0 && b % a == 0 && a / z == b / a && a / z > 1 && (a - z) != (b - a);
      ratio = geometric ? b / a : 0;
    }
    const long long step = b - a;
    if (!geometric && step <= 0) throw ConfigError("'...' needs an increasing progression");
    long long next = geometric ? b * ratio : b + step;
    while (next < end) {
      out.push_back(static_cast<int>(next));
      next = geometric ? next * ratio : next + step;
    }
  }
  return out;
}

}  // namespace ccd::io
