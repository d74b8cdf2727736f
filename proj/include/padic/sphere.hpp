#pragma once

// Dynamics on p-adic spheres S(y, p^-r) = { z : v(z - y) = r }.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "padic/function.hpp"
#include "padic/verdict.hpp"

namespace padic::sphere {

/// Modulo p^k (k > r) the sphere is { y + p^r s + p^(r+1) S : 1 <= s < p,
/// 0 <= S < p^(k-r-1) }. The residue with coordinates (s, S) has index
/// (s - 1) * p^(k-r-1) + S.
struct Sphere {
  mpz_class y;
  unsigned r = 1;
  std::uint64_t p = 2;
};

/// Sphere residues mod p^k in index order. LevelError when k <= r.
std::vector<std::uint64_t> sphere_residues(const Sphere& sphere, unsigned k);

/// Every sphere residue maps into the sphere mod p^k. The witness always
/// records whether f(y) = y mod p^r, which invariance forces.
Verdict is_sphere_invariant(const FunctionSpec& f, const Sphere& sphere, unsigned k);

/// f permutes the sphere residues mod p^k in one cycle. DomainError when
/// the sphere is not invariant at level k.
Verdict sphere_single_cycle(const FunctionSpec& f, const Sphere& sphere, unsigned k);

/// Invariance and a single cycle at every level r+1..k_max.
Verdict sphere_ergodic_bruteforce(const FunctionSpec& f, const Sphere& sphere, unsigned k_max);

/// Least e >= 1 with g^e = 1 mod modulus. DomainError if g is not a unit.
std::uint64_t multiplicative_order(const mpz_class& g, std::uint64_t modulus);
/// g generates (Z/p^2)^*.
bool is_primitive_mod_p2(const mpz_class& g, std::uint64_t p);

/// Smallest radius exponent for which the derivative criterion applies:
/// 1 for p > 3, 2 for p <= 3, and at least n + 3 for A-class functions
/// with p^n f in B.
unsigned analytic_r_min(const FunctionSpec& f, std::uint64_t p);

/// Derivative criterion for ergodicity on the sphere.
///   odd p:  f(y) = y mod p^(r+1) and f'(y) generates (Z/p^2)^*
///   p = 2:  f(y) = y mod 2^(r+1), f(y) != y mod 2^(r+2), f'(y) = 1 mod 4
/// Inconclusive below analytic_r_min or outside class A. For p = 3, r = 2
/// the derivative verdict is only advisory: the status comes from
/// sphere_ergodic_bruteforce at k_max = r + 4 and the witness keeps both.
SphereVerdict sphere_ergodic_analytic(const FunctionSpec& f, const Sphere& sphere);

/// Cycle conditions at depth t >= 1:
///   (1) f permutes { y + p^r s : 1 <= s < p } mod p^(r+1) in one cycle;
///   (2) f^(p-1) permutes each ball y + p^r s + p^(r+1) Z mod p^(r+t+1) in
///       one cycle.
/// Condition (2) is evaluated for every s; the witness lists the per-s
/// results and whether "some s" and "all s" agree. Status: (1) and (2) for
/// all s.
Verdict sphere_cycle_conditions(const FunctionSpec& f, const Sphere& sphere, unsigned t);

/// Ergodicity on every sufficiently small sphere around y. Odd p: f(y) = y
/// at precision K and f'(y) primitive mod p^2. p = 2 always fails: the
/// 2-adic criterion requires f(y) != y.
Verdict all_small_spheres_verdict(const FunctionSpec& f, const mpz_class& y, std::uint64_t p,
                                  unsigned K);

/// x^ell + p^(r+1) u(x) on the sphere around 1: ergodic iff ell generates
/// (Z/p^2)^*. Inconclusive for r <= 1.
Verdict perturbed_monomial_verdict(unsigned ell, const FunctionSpec& u, unsigned r,
                                   std::uint64_t p);

}  // namespace padic::sphere
