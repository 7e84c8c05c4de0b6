#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ccd::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

// argv[0] is the program name. Datasets go to --out or `out`; diagnostics and
// the JSON error record to `err`.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);
int run_command(const std::vector<std::string>& argv);

// Analytic-oracle checks, one line each; true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace ccd::io
