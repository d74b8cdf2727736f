#pragma once

// Induced maps on (Z/p^k)^n and the exhaustive and criterion-based verdicts
// built on them.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "padic/function.hpp"
#include "padic/verdict.hpp"

namespace padic::residue {

/// f mod p^k tabulated over (Z/p^k)^n. Entry i*m + c is component c of
/// f(x) where i is the mixed-radix index sum x_j * p^(k*j).
struct InducedMap {
  std::uint64_t p = 0;
  unsigned k = 0;
  unsigned n = 1;
  unsigned m = 1;
  std::uint64_t modulus = 0;  // p^k
  std::vector<std::uint64_t> table;

  std::uint64_t domain_size() const noexcept { return table.size() / m; }
  std::uint64_t operator[](std::uint64_t x) const { return table[x]; }
};

/// Throws NotCompatible (unless check_compat is false) and ResourceError
/// when p^(kn) exceeds the state limit.
InducedMap induced_table(const FunctionSpec& f, std::uint64_t p, unsigned k,
                         bool check_compat = true);

/// Witness of a compatibility violation found in the table, if any. Runs in
/// one pass: each point is compared with the point obtained by clearing its
/// highest nonzero digit position.
std::optional<nlohmann::json> compatibility_violation(const InducedMap& map);

struct Cycle {
  std::uint64_t length;
  std::uint64_t representative;  // smallest element
};

struct CycleStructure {
  std::uint64_t p = 0;
  unsigned k = 0;
  std::vector<Cycle> cycles;  // ordered by representative
  std::uint64_t total = 0;

  struct LengthClass {
    std::uint64_t representative;  // smallest over the cycles of this length
    std::uint64_t count;
  };
  std::map<std::uint64_t, LengthClass> by_length() const;
};

/// Cycle decomposition of a univariate permutation; DomainError otherwise.
CycleStructure cycle_structure(const InducedMap& map);
CycleStructure cycle_structure(const FunctionSpec& f, std::uint64_t p, unsigned k);

/// "k,cycle_length,representative,count", one row per distinct length.
void write_cycles_csv(std::ostream& out, const CycleStructure& cs);

Verdict is_bijective_mod(const InducedMap& map);
Verdict is_bijective_mod(const FunctionSpec& f, std::uint64_t p, unsigned k);
Verdict is_transitive_mod(const InducedMap& map);
Verdict is_transitive_mod(const FunctionSpec& f, std::uint64_t p, unsigned k);

/// Bijectivity at every level 1..k_max.
Verdict measure_preserving_verdict(const FunctionSpec& f, std::uint64_t p, unsigned k_max);
/// Transitivity at every level 1..k_max; witness names the first failing level.
Verdict ergodic_verdict_bruteforce(const FunctionSpec& f, std::uint64_t p, unsigned k_max);

/// Level whose transitivity decides ergodicity of a B-class function:
/// 3 for p in {2, 3}, 2 otherwise.
unsigned critical_level(std::uint64_t p);
/// Decision for B-class functions by transitivity at the critical level.
/// Throws DomainError for functions not known to be in B.
Verdict ergodic_verdict_B(const FunctionSpec& f, std::uint64_t p);

/// Transitivity of x -> alpha + beta * x modulo p^k from the coefficient
/// conditions alone. For k >= 2: alpha a unit and beta = 1 mod p (mod 4 when
/// p = 2). For k = 1: alpha a unit and beta = 1 mod p.
Verdict affine_transitivity(const mpz_class& alpha, const mpz_class& beta, std::uint64_t p,
                            unsigned k);

/// Fibers of F: (Z/p^k)^n -> (Z/p^k)^m all of size p^(k(n-m)); counted by
/// streaming over the domain. Requires n >= m.
Verdict is_balanced_mod(const FunctionSpec& F, std::uint64_t p, unsigned k);
Verdict multivariate_mp_verdict(const FunctionSpec& F, std::uint64_t p, unsigned k_max);

struct BallDecomposition {
  unsigned s = 0;
  std::uint64_t preimage_size = 0;
  /// Coset representatives a with components in [0, p^s), sorted.
  std::vector<std::vector<std::uint64_t>> representatives;
};

/// Preimage of b + p^s (Z/p^k)^m under F mod p^k written as a union of
/// cosets a + p^s (Z/p^k)^n. DomainError unless F is balanced at every level
/// up to k; CrossCheckFailure if the preimage is not such a union of exactly
/// p^(s(n-m)) cosets.
BallDecomposition preimage_ball_decomposition(const FunctionSpec& F, std::uint64_t p,
                                              const std::vector<std::uint64_t>& b, unsigned s,
                                              unsigned k);

/// Samples pairs x != y mod p^K and compares v(f(x) - f(y)) with v(x - y).
/// Inconclusive when f is not bijective at some exhaustively checkable level
/// up to K.
Verdict isometry_check(const FunctionSpec& f, std::uint64_t p, unsigned K,
                       std::size_t sample_count, std::uint64_t seed);

/// Advisory 2-adic test on Mahler coefficients a_0..a_{count-1} mod 2^K:
/// a_0 odd, a_1 = 1 mod 4, a_i = 0 mod 2^(floor(log2(i+1))+1) for i >= 2.
/// The witness also records whether a_0 = 1.
Verdict check_ergodic_mahler_2adic(const FunctionSpec& f, unsigned K, std::size_t count);

/// Ergodicity of a polynomial over Q_p: with k = floor(log_p d) + 3, the
/// values at 0..p^k - 1 must be p-integral and the induced map mod p^k
/// compatible and transitive.
Verdict qp_polynomial_ergodic(const std::vector<mpq_class>& coeffs, std::uint64_t p);

}  // namespace padic::residue
