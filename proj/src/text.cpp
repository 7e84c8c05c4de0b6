#include "ccd/text.hpp"

#include <array>
#include <charconv>

#include "ccd/error.hpp"
#include "ccd/qubit.hpp"

namespace ccd {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view tok, std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw ConfigError(line, column, "expected a number, got '" + std::string(tok) + "'");
  return v;
}

double parse_angle(std::string_view tok, std::size_t line, std::size_t column) {
  const auto p = tok.find("pi");
  if (p == std::string_view::npos) return parse_number(tok, line, column);
  const std::string_view coef = tok.substr(0, p);
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (!coef.empty() && coef != "+") c = parse_number(coef, line, column);
  double den = 1.0;
  const std::string_view rest = tok.substr(p + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw ConfigError(line, column, "malformed angle '" + std::string(tok) + "'");
    den = parse_number(rest.substr(1), line, column);
    if (den == 0.0) throw ConfigError(line, column, "zero denominator in '" + std::string(tok) + "'");
  }
  return c * kPi / den;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

}  // namespace ccd
