#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "padic/core.hpp"
#include "padic/function.hpp"

namespace padic {

enum class Backend { automatic, word, big };

/// A FunctionSpec compiled for one context. Evaluation returns f(x) mod p^K;
/// internally the ring carries K + headroom digits so that the exact
/// divisions of A-class wrappers and binomial terms lose nothing.
///
/// Compiling checks p-dependent constraints (bitwise operators need p = 2);
/// evaluation may throw NotInClassA. Instances are immutable and may be
/// shared between threads.
class Evaluator {
 public:
  Evaluator(const FunctionSpec& f, PadicContext ctx, Backend backend = Backend::automatic);

  const PadicContext& ctx() const noexcept { return ctx_; }
  unsigned arity() const noexcept { return arity_; }
  unsigned coarity() const noexcept { return coarity_; }
  /// Digits carried by the internal ring.
  unsigned working_digits() const noexcept;
  bool uses_word_ring() const noexcept;

  PadicInt operator()(const PadicInt& x) const;
  std::vector<PadicInt> operator()(std::span<const PadicInt> x) const;

  /// Residue interface for sweeps; requires p^K < 2^64. Inputs are integer
  /// representatives, outputs lie in [0, p^K).
  std::uint64_t word(std::uint64_t x) const;
  void word(std::span<const std::uint64_t> x, std::span<std::uint64_t> out) const;

  struct Impl;

 private:
  PadicContext ctx_;
  unsigned arity_;
  unsigned coarity_;
  std::shared_ptr<const Impl> impl_;
};

/// f(x) mod p^K with K the precision of x.
PadicInt evaluate(const FunctionSpec& f, const PadicInt& x);
std::vector<PadicInt> evaluate(const FunctionSpec& f, std::span<const PadicInt> x);

/// n-fold application of f starting at x.
PadicInt iterate_eval(const FunctionSpec& f, const PadicInt& x, unsigned n);

/// binomial(x, i) mod p^K, via the falling factorial at precision
/// K + v_p(i!) followed by exact division by i!.
PadicInt binomial_at(const PadicInt& x, std::uint64_t i);

}  // namespace padic
