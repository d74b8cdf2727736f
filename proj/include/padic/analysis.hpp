#pragma once

// Finite-difference and Taylor-quotient analysis of compatible functions.

#include <cstddef>
#include <span>
#include <vector>

#include "padic/core.hpp"
#include "padic/function.hpp"
#include "padic/verdict.hpp"

namespace padic {

/// a_i = (Delta^i f)(0) mod p^K for i < count.
std::vector<PadicInt> mahler_coefficients(const FunctionSpec& f, const PadicContext& ctx,
                                          std::size_t count);

/// sum a_i * binomial(x, i) mod p^K.
PadicInt mahler_sum(std::span<const PadicInt> a, const PadicInt& x);

/// f'(y) mod p^K for f in B or A (K = y.precision()).
///
/// For an A-class function with p^n f in B the Taylor remainder beyond the
/// linear term has valuation >= 2m - n at step p^m, so the quotient
/// (f(y + p^m) - f(y)) / p^m with m = K + n is exact modulo p^K. The two
/// evaluations run at precision 2K + n. Throws DomainError for functions
/// outside A.
PadicInt derivative_at(const FunctionSpec& f, const PadicInt& y);

/// Symbolic derivative of a polynomial at y.
PadicInt poly_derivative_at(const Poly& f, const PadicInt& y);

/// Exhaustive check that f(x) mod p^j depends only on x mod p^j for every
/// x in (Z/p^k)^n and j < k. Witness: the offending pair.
Verdict compatibility_check(const FunctionSpec& f, const PadicContext& ctx, unsigned k);

}  // namespace padic
