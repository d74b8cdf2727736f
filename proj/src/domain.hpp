#pragma once

// Mixed-radix indexing of (Z/p^k)^n used by the exhaustive sweeps.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "padic/evaluator.hpp"
#include "padic/limits.hpp"

namespace padic::detail {

struct Domain {
  Domain(std::uint64_t p_, unsigned k_, unsigned n_, const std::string& what)
      : p(p_), k(k_), n(n_), size(checked_states(p_, std::uint64_t{k_} * n_, what)) {
    modulus = 1;
    for (unsigned i = 0; i < k; ++i) modulus *= p;
  }

  void decode(std::uint64_t idx, std::span<std::uint64_t> x) const {
    for (unsigned i = 0; i < n; ++i) {
      x[i] = idx % modulus;
      idx /= modulus;
    }
  }

  std::uint64_t encode(std::span<const std::uint64_t> x) const {
    std::uint64_t idx = 0;
    for (unsigned i = n; i-- > 0;) idx = idx * modulus + x[i];
    return idx;
  }

  std::uint64_t p;
  unsigned k;
  unsigned n;
  std::uint64_t size;
  std::uint64_t modulus;
};

/// Outputs of f on every point of the domain, `coarity` words per point.
inline std::vector<std::uint64_t> tabulate(const Evaluator& e, const Domain& d) {
  const unsigned m = e.coarity();
  std::vector<std::uint64_t> table(d.size * m);
  std::vector<std::uint64_t> x(d.n);
  for (std::uint64_t idx = 0; idx < d.size; ++idx) {
    d.decode(idx, x);
    e.word(x, std::span<std::uint64_t>(table.data() + idx * m, m));
  }
  return table;
}

inline std::uint64_t ipow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= p;
  return r;
}

}  // namespace padic::detail
