#pragma once

// Full-period word generators driven by ergodic 2-adic maps.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "padic/evaluator.hpp"
#include "padic/function.hpp"
#include "padic/verdict.hpp"

namespace padic::prng {

/// Which bits of the K-bit state are emitted. Low bits of a compatible map
/// repeat with period 2^j at width j, so high(j) is the better choice when
/// fewer than K bits are wanted.
struct OutputPolicy {
  enum class Kind { full, high, low };
  Kind kind = Kind::full;
  unsigned bits = 0;  // j for high/low

  static OutputPolicy full() { return {}; }
  static OutputPolicy high(unsigned j) { return {Kind::high, j}; }
  static OutputPolicy low(unsigned j) { return {Kind::low, j}; }

  /// "full", "high:J" or "low:J"; throws DomainError otherwise.
  static OutputPolicy parse(std::string_view text);
  std::string to_string() const;
  unsigned width(unsigned K) const { return kind == Kind::full ? K : bits; }
  std::uint64_t apply(std::uint64_t state, unsigned K) const;
};

struct GeneratorConfig {
  FunctionSpec f;
  unsigned K = 32;  // state width in bits, 1..64
  OutputPolicy policy;
  std::uint64_t seed = 0;
};

/// The gate a map must pass before it may drive a generator: B-class at
/// p = 2 and transitive mod 8. Throws GuardError with the reason otherwise.
Verdict validate_map(const FunctionSpec& f);

class Generator {
 public:
  /// Validates the map and the config; throws GuardError on rejection.
  explicit Generator(GeneratorConfig config);

  /// Advances the state and returns the output word of the new state.
  std::uint64_t next();
  std::uint64_t state() const noexcept { return current_; }
  std::uint64_t emitted() const noexcept { return emitted_; }
  const GeneratorConfig& config() const noexcept { return config_; }

 private:
  GeneratorConfig config_;
  Evaluator eval_;
  std::uint64_t current_;
  std::uint64_t emitted_ = 0;
};

/// Walks the orbit of seed mod 2^K; holds iff the first return takes
/// exactly 2^K steps. The witness carries the observed period.
Verdict audit_period(const FunctionSpec& f, unsigned K, std::uint64_t seed = 0);

/// Over 2^K steps from 0, every pattern of the low j bits occurs exactly
/// 2^(K-j) times.
Verdict audit_equidistribution(const FunctionSpec& f, unsigned K, unsigned j);

/// n output words, little-endian, each ceil(width / 8) bytes.
std::vector<std::uint8_t> stream(const GeneratorConfig& config, std::size_t n_words);

}  // namespace padic::prng
