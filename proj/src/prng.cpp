#include "padic/prng.hpp"

#include <charconv>

#include "padic/errors.hpp"
#include "padic/limits.hpp"
#include "padic/residue.hpp"

namespace padic::prng {

namespace {

std::uint64_t mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

void check_width(unsigned K) {
  if (K < 1 || K > 64) throw DomainError("state width must be in [1, 64], got " + std::to_string(K));
}

GeneratorConfig checked(GeneratorConfig config) {
  check_width(config.K);
  validate_map(config.f);
  return config;
}

}  // namespace

OutputPolicy OutputPolicy::parse(std::string_view text) {
  if (text == "full") return full();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view kind = text.substr(0, colon);
    const std::string_view num = text.substr(colon + 1);
    unsigned j = 0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), j);
    if (ec == std::errc() && ptr == num.data() + num.size() && j >= 1) {
      if (kind == "high") return high(j);
      if (kind == "low") return low(j);
    }
  }
  throw DomainError("output policy must be full, high:J or low:J, got '" + std::string(text) + "'");
}

std::string OutputPolicy::to_string() const {
  switch (kind) {
    case Kind::full: return "full";
    case Kind::high: return "high:" + std::to_string(bits);
    case Kind::low: return "low:" + std::to_string(bits);
  }
  return "full";
}

std::uint64_t OutputPolicy::apply(std::uint64_t state, unsigned K) const {
  switch (kind) {
    case Kind::full: return state;
    case Kind::high: return state >> (K - bits);
    case Kind::low: return state & mask(bits);
  }
  return state;
}

Verdict validate_map(const FunctionSpec& f) {
  if (f.arity() != 1 || f.coarity() != 1) {
    throw GuardError("generator map must be univariate: " + f.to_string());
  }
  if (f.classify(2).cls != FunctionClass::B) {
    throw GuardError("generator map must be in class B at p = 2 so that transitivity mod 8 "
                     "decides full period: " + f.to_string());
  }
  Verdict v = residue::ergodic_verdict_B(f, 2);
  if (!v.holds()) {
    throw GuardError(f.to_string() + " is not transitive mod 8: " + v.witness.dump());
  }
  return v;
}

Generator::Generator(GeneratorConfig config)
    : config_(checked(std::move(config))),
      eval_(config_.f, PadicContext(2, config_.K)),
      current_(config_.seed & mask(config_.K)) {
  if (config_.policy.kind != OutputPolicy::Kind::full &&
      (config_.policy.bits < 1 || config_.policy.bits > config_.K)) {
    throw GuardError("output policy " + config_.policy.to_string() + " needs 1 <= j <= K = " +
                     std::to_string(config_.K));
  }
  if (config_.seed > mask(config_.K)) {
    throw GuardError("seed " + std::to_string(config_.seed) + " does not fit in " +
                     std::to_string(config_.K) + " bits");
  }
}

std::uint64_t Generator::next() {
  current_ = eval_.word(current_);
  ++emitted_;
  return config_.policy.apply(current_, config_.K);
}

Verdict audit_period(const FunctionSpec& f, unsigned K, std::uint64_t seed) {
  const Stopwatch clock;
  check_width(K);
  const std::uint64_t states = checked_states(2, K, "audit_period");
  Verdict v = make_verdict("period", 2, {K});
  const Evaluator e(f, PadicContext(2, K));
  const std::uint64_t start = seed & mask(K);
  std::uint64_t x = start;
  std::uint64_t period = 0;
  for (std::uint64_t step = 1; step <= states; ++step) {
    x = e.word(x);
    if (x == start) {
      period = step;
      break;
    }
  }
  v.status = period == states ? Status::holds : Status::fails;
  v.witness = {{"seed", start}, {"period", period}, {"expected", states}};
  if (period == 0) v.witness["returned_to_seed"] = false;
  return clock.stamp(v);
}

Verdict audit_equidistribution(const FunctionSpec& f, unsigned K, unsigned j) {
  const Stopwatch clock;
  check_width(K);
  if (j < 1 || j > K) throw DomainError("need 1 <= j <= K");
  const std::uint64_t states = checked_states(2, K, "audit_equidistribution");
  Verdict v = make_verdict("equidistribution", 2, {K, j});
  const Evaluator e(f, PadicContext(2, K));
  std::vector<std::uint64_t> counts(std::uint64_t{1} << j, 0);
  std::uint64_t x = 0;
  for (std::uint64_t step = 0; step < states; ++step) {
    ++counts[x & mask(j)];
    x = e.word(x);
  }
  const std::uint64_t expected = states >> j;
  v.status = Status::holds;
  for (std::uint64_t pattern = 0; pattern < counts.size(); ++pattern) {
    if (counts[pattern] != expected) {
      v.status = Status::fails;
      v.witness = {{"pattern", pattern}, {"count", counts[pattern]}, {"expected", expected}};
      break;
    }
  }
  if (v.holds()) v.witness = {{"count_per_pattern", expected}};
  return clock.stamp(v);
}

std::vector<std::uint8_t> stream(const GeneratorConfig& config, std::size_t n_words) {
  Generator gen(config);
  const unsigned bytes = (config.policy.width(config.K) + 7) / 8;
  std::vector<std::uint8_t> out;
  out.reserve(n_words * bytes);
  for (std::size_t i = 0; i < n_words; ++i) {
    std::uint64_t w = gen.next();
    for (unsigned b = 0; b < bytes; ++b) {
      out.push_back(static_cast<std::uint8_t>(w & 0xff));
      w >>= 8;
    }
  }
  return out;
}

}  // namespace padic::prng
