#pragma once

// Residues of p-adic integers at an explicit working precision.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "padic/errors.hpp"

namespace padic {

bool is_prime(std::uint64_t n);

/// Prime p together with a working precision K (number of base-p digits).
/// Cheap to copy; the modulus p^K is shared.
class PadicContext {
 public:
  /// Throws DomainError if p is not prime, PrecisionError if K == 0.
  PadicContext(std::uint64_t p, unsigned K);

  std::uint64_t p() const noexcept { return p_; }
  unsigned precision() const noexcept { return K_; }
  const mpz_class& modulus() const noexcept { return *modulus_; }

  /// Same prime at a different precision.
  PadicContext with_precision(unsigned K) const;

  friend bool operator==(const PadicContext& a, const PadicContext& b) noexcept {
    return a.p_ == b.p_ && a.K_ == b.K_;
  }

 private:
  std::uint64_t p_;
  unsigned K_;
  std::shared_ptr<const mpz_class> modulus_;
};

mpz_class pow_p(std::uint64_t p, unsigned e);

/// p-adic integer known modulo p^K. Immutable.
class PadicInt {
 public:
  /// Any rational integer; it is reduced into [0, p^K).
  PadicInt(PadicContext ctx, const mpz_class& value);
  PadicInt(PadicContext ctx, long value) : PadicInt(std::move(ctx), mpz_class(value)) {}

  const PadicContext& ctx() const noexcept { return ctx_; }
  const mpz_class& residue() const noexcept { return residue_; }
  std::uint64_t p() const noexcept { return ctx_.p(); }
  unsigned precision() const noexcept { return ctx_.precision(); }

  /// residue mod p^j, 1 <= j <= K.
  mpz_class reduce(unsigned j) const;
  /// The same value viewed at the lower precision j.
  PadicInt truncate(unsigned j) const;

  /// K base-p digits, least significant first.
  std::vector<std::uint64_t> digits() const;

  /// Largest v <= K with p^v | residue; K for the zero residue.
  unsigned valuation() const;
  bool is_unit() const { return valuation() == 0; }

  PadicInt operator-() const;
  PadicInt pow(const mpz_class& exponent) const;
  PadicInt pow(unsigned long exponent) const { return pow(mpz_class(exponent)); }

  /// Throws NotInvertible unless valuation() == 0.
  PadicInt inverse_unit() const;

  /// z / p^t, carried at precision K - t. Throws InexactDivision if
  /// valuation() < t and PrecisionError if t >= K.
  PadicInt exact_div_p(unsigned t) const;

  /// z * p^t at the same precision.
  PadicInt mul_p(unsigned t) const;

  friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
  friend PadicInt operator*(const PadicInt& a, const PadicInt& b);
  friend bool operator==(const PadicInt& a, const PadicInt& b) {
    return a.ctx_ == b.ctx_ && a.residue_ == b.residue_;
  }

 private:
  PadicInt(PadicContext ctx, mpz_class residue, bool /*already_reduced*/)
      : ctx_(std::move(ctx)), residue_(std::move(residue)) {}

  PadicContext ctx_;
  mpz_class residue_;
};

std::ostream& operator<<(std::ostream& os, const PadicInt& z);

/// v_p(i!) by Legendre's formula.
std::uint64_t val_factorial(std::uint64_t i, std::uint64_t p);

/// Smallest i with v_p(i!) >= K: falling-factorial terms from that index on
/// vanish modulo p^K.
std::uint64_t truncation_index(std::uint64_t p, unsigned K);

/// v_p of a nonzero integer; `cap` for zero.
unsigned valuation_of(const mpz_class& z, std::uint64_t p, unsigned cap);

}  // namespace padic
