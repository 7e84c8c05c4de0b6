#include "ccd/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace ccd {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CCD_SIM_THREADS")) {
    unsigned v = 0;
    const auto* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc() && ptr == end && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace ccd
