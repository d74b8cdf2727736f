#pragma once

#include <cstdint>
#include <string>

namespace padic {

inline constexpr std::uint64_t kDefaultStateLimit = std::uint64_t{1} << 22;

/// Maximum number of states an exhaustive sweep may touch. Process-wide,
/// thread-safe; defaults to 2^22.
std::uint64_t state_limit();
void set_state_limit(std::uint64_t limit);

/// p^e as a state count; throws ResourceError if it exceeds state_limit().
std::uint64_t checked_states(std::uint64_t p, std::uint64_t e, const std::string& what);

}  // namespace padic
