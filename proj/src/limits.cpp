#include "padic/limits.hpp"

#include <atomic>

#include "padic/errors.hpp"

namespace padic {
namespace {
std::atomic<std::uint64_t> g_limit{kDefaultStateLimit};
}

std::uint64_t state_limit() { return g_limit.load(std::memory_order_relaxed); }

void set_state_limit(std::uint64_t limit) { g_limit.store(limit, std::memory_order_relaxed); }

std::uint64_t checked_states(std::uint64_t p, std::uint64_t e, const std::string& what) {
  const std::uint64_t limit = state_limit();
  std::uint64_t n = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (n > limit / p) {
      throw ResourceError(what + ": " + std::to_string(p) + "^" + std::to_string(e) +
                          " states exceed the limit of " + std::to_string(limit));
    }
    n *= p;
  }
  if (n > limit) {
    throw ResourceError(what + ": " + std::to_string(n) + " states exceed the limit of " +
                        std::to_string(limit));
  }
  return n;
}

}  // namespace padic
