#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "padic/analysis.hpp"
#include "padic/errors.hpp"
#include "padic/evaluator.hpp"
#include "padic/parser.hpp"

using padic::FunctionSpec;
using padic::PadicContext;
using padic::PadicInt;
using padic::parse;

namespace {

std::vector<mpz_class> residues(const std::vector<PadicInt>& v) {
  std::vector<mpz_class> out;
  for (const auto& z : v) out.push_back(z.residue());
  return out;
}

}  // namespace

TEST_CASE("Mahler coefficients") {
  using V = std::vector<mpz_class>;
  CHECK(residues(padic::mahler_coefficients(parse("x^2"), PadicContext(2, 4), 3)) == V{0, 1, 2});
  CHECK(residues(padic::mahler_coefficients(parse("7"), PadicContext(5, 3), 3)) == V{7, 0, 0});
  CHECK(residues(padic::mahler_coefficients(parse("3 + 5*x"), PadicContext(2, 6), 3)) ==
        V{3, 5, 0});
  CHECK(residues(padic::mahler_coefficients(parse("mahler2(1)"), PadicContext(2, 6), 3)) ==
        V{1, 5, 0});
}

TEST_CASE("Mahler expansion reproduces polynomials") {
  std::mt19937_64 rng(31);
  for (std::uint64_t p : {2, 3, 5}) {
    const unsigned K = 6;
    const PadicContext ctx(p, K);
    const std::uint64_t points = oracle::ipow(p, K);
    for (int t = 0; t < 20; ++t) {
      std::vector<mpz_class> c(1 + rng() % 6);
      for (auto& ci : c) ci = static_cast<unsigned long>(rng() % oracle::ipow(p, 4));
      const FunctionSpec f = FunctionSpec::poly(c);
      const auto a = padic::mahler_coefficients(f, ctx, c.size());
      const padic::Evaluator e(f, ctx);
      for (std::uint64_t x = 0; x < points; x += 1 + rng() % 7) {
        const PadicInt xi(ctx, static_cast<long>(x));
        CHECK(padic::mahler_sum(a, xi) == e(xi));
      }
    }
  }
}

TEST_CASE("derivatives") {
  CHECK(padic::derivative_at(parse("x^2"), PadicInt(PadicContext(5, 3), 3)).residue() == 6);
  CHECK(padic::derivative_at(parse("x^2"), PadicInt(PadicContext(5, 2), 1)).residue() == 2);
  CHECK(padic::derivative_at(parse("bseries(0, 1, 2)"), PadicInt(PadicContext(3, 2), 0))
            .residue() == 8);
  // (2x^2 + 4x)/2 = x^2 + 2x has derivative 2x + 2.
  CHECK(padic::derivative_at(parse("awrap(1, 2*x^2 + 4*x)"), PadicInt(PadicContext(2, 4), 3))
            .residue() == 8);
  CHECK_THROWS_AS(padic::derivative_at(parse("xor(x, 1)"), PadicInt(PadicContext(2, 4), 3)),
                  padic::DomainError);
}

TEST_CASE("numeric derivative matches the symbolic one on polynomials") {
  std::mt19937_64 rng(32);
  for (std::uint64_t p : {2, 3, 5}) {
    for (int t = 0; t < 100; ++t) {
      const unsigned K = 1 + rng() % 8;
      std::vector<mpz_class> c(1 + rng() % 7);
      for (auto& ci : c) ci = static_cast<long>(rng() % 10000) - 5000;
      const FunctionSpec f = FunctionSpec::poly(c);
      const PadicInt y(PadicContext(p, K), static_cast<long>(rng() % 100000));
      CHECK(padic::derivative_at(f, y) == padic::poly_derivative_at(*f.as<padic::Poly>(), y));
    }
  }
}

TEST_CASE("derivative of B-series matches a difference quotient oracle") {
  // For b-series the derivative at y is sum b_i * d/dx[x(x-1)...(x-i+1)]
  // evaluated by the product rule in exact integers.
  std::mt19937_64 rng(33);
  for (std::uint64_t p : {3, 5, 7}) {
    for (int t = 0; t < 30; ++t) {
      std::vector<long> b(1 + rng() % 6);
      for (long& bi : b) bi = static_cast<long>(rng() % 100) - 50;
      const long y = static_cast<long>(rng() % 1000);
      mpz_class d = 0;
      for (std::size_t i = 1; i < b.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          mpz_class prod = 1;
          for (std::size_t l = 0; l < i; ++l) {
            if (l != j) prod *= y - static_cast<long>(l);
          }
          d += b[i] * prod;
        }
      }
      const PadicContext ctx(p, 5);
      mpz_class want = d % ctx.modulus();
      if (want < 0) want += ctx.modulus();
      std::vector<mpz_class> bz(b.begin(), b.end());
      CHECK(padic::derivative_at(FunctionSpec::bseries(bz), PadicInt(ctx, y)).residue() == want);
    }
  }
}

TEST_CASE("compatibility checks") {
  CHECK(padic::compatibility_check(parse("x^2"), PadicContext(3, 3), 3).holds());
  // (x^2 - x)/2 is integer valued but not 1-Lipschitz: C(2,2) = 1 while C(0,2) = 0.
  const auto half = padic::compatibility_check(parse("awrap(1, x^2 - x)"), PadicContext(2, 4), 2);
  CHECK(half.fails());
  CHECK_FALSE(half.witness.is_null());
  CHECK(padic::compatibility_check(parse("not(x) + x"), PadicContext(2, 4), 4).holds());
  CHECK(padic::compatibility_check(parse("[x1*x2, xor(x1, x2)]"), PadicContext(2, 3), 3).holds());

  // Exhaustive oracle for the half-square: compare every pair directly.
  bool lipschitz = true;
  for (long x = 0; x < 16; ++x) {
    for (long z = 0; z < 16; ++z) {
      const unsigned vx = oracle::valuation(static_cast<std::uint64_t>((x - z + 16) % 16), 2, 4);
      const long fx = x * (x - 1) / 2, fz = z * (z - 1) / 2;
      const unsigned vf = oracle::valuation(static_cast<std::uint64_t>(((fx - fz) % 16 + 16) % 16), 2, 4);
      if (vf < vx) lipschitz = false;
    }
  }
  CHECK_FALSE(lipschitz);
}
