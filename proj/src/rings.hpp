#pragma once

// Residue rings Z/p^M used by the compiled evaluator. WordRing keeps residues
// in a machine word (p^M <= 2^62); BigRing uses GMP for everything else.
// Both expose the same interface so the program compiler is written once.

#include <gmpxx.h>

#include <cstdint>

#include "padic/core.hpp"

namespace padic::detail {

class WordRing {
 public:
  using value = std::uint64_t;
  static constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 62;

  WordRing(std::uint64_t p, unsigned M) : p_(p), M_(M), mod_(pow_p(p, M).get_ui()) {}

  static bool fits(std::uint64_t p, unsigned M) { return pow_p(p, M) <= mpz_class(kMaxModulus); }

  std::uint64_t p() const { return p_; }
  unsigned digits() const { return M_; }

  value from(const mpz_class& z) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), pow_p(p_, M_).get_mpz_t());
    return r.get_ui();
  }
  value from_word(std::uint64_t w) const { return w % mod_; }
  mpz_class to_mpz(value v) const { return mpz_class(static_cast<unsigned long>(v)); }
  std::uint64_t to_word(value v) const { return v; }

  value zero() const { return 0; }
  value one() const { return mod_ == 1 ? 0 : 1; }
  value add(value a, value b) const {
    const value s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  value sub(value a, value b) const { return a >= b ? a - b : a + (mod_ - b); }
  value neg(value a) const { return a == 0 ? 0 : mod_ - a; }
  value mul(value a, value b) const {
    if (mod_ <= (std::uint64_t{1} << 32)) return (a * b) % mod_;
    return static_cast<value>((static_cast<unsigned __int128>(a) * b) % mod_);
  }
  value pow(value a, unsigned e) const {
    value acc = one();
    for (; e > 0; e >>= 1) {
      if (e & 1) acc = mul(acc, a);
      if (e > 1) a = mul(a, a);
    }
    return acc;
  }
  value band(value a, value b) const { return a & b; }
  value bor(value a, value b) const { return a | b; }
  value bxor(value a, value b) const { return a ^ b; }
  value bnot(value a) const { return mod_ - 1 - a; }

  bool divisible(value a, unsigned t) const {
    for (unsigned i = 0; i < t; ++i) {
      if (a % p_ != 0) return false;
      a /= p_;
    }
    return true;
  }
  value div_p(value a, unsigned t) const {
    for (unsigned i = 0; i < t; ++i) a /= p_;
    return a;
  }
  std::uint64_t mod_word(value a, std::uint64_t m) const { return a % m; }

 private:
  std::uint64_t p_;
  unsigned M_;
  std::uint64_t mod_;
};

class BigRing {
 public:
  using value = mpz_class;

  BigRing(std::uint64_t p, unsigned M) : p_(p), M_(M), mod_(pow_p(p, M)), base_(pow_p(p, 1)) {}

  std::uint64_t p() const { return p_; }
  unsigned digits() const { return M_; }

  value from(const mpz_class& z) const {
    value r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), mod_.get_mpz_t());
    return r;
  }
  value from_word(std::uint64_t w) const {
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(w), 0, 0, &w);
    return from(z);
  }
  mpz_class to_mpz(const value& v) const { return v; }

  value zero() const { return 0; }
  value one() const { return from(mpz_class(1)); }
  value add(const value& a, const value& b) const { return from(a + b); }
  value sub(const value& a, const value& b) const { return from(a - b); }
  value neg(const value& a) const { return from(-a); }
  value mul(const value& a, const value& b) const { return from(a * b); }
  value pow(const value& a, unsigned e) const {
    value r;
    mpz_powm_ui(r.get_mpz_t(), a.get_mpz_t(), e, mod_.get_mpz_t());
    return r;
  }
  value band(const value& a, const value& b) const { return a & b; }
  value bor(const value& a, const value& b) const { return a | b; }
  value bxor(const value& a, const value& b) const { return a ^ b; }
  value bnot(const value& a) const { return from(mod_ - 1 - a); }

  bool divisible(const value& a, unsigned t) const {
    return mpz_divisible_p(a.get_mpz_t(), pow_p(p_, t).get_mpz_t()) != 0;
  }
  value div_p(const value& a, unsigned t) const {
    value q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), pow_p(p_, t).get_mpz_t());
    return q;
  }

 private:
  std::uint64_t p_;
  unsigned M_;
  mpz_class mod_;
  mpz_class base_;
};

}  // namespace padic::detail
