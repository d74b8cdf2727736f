#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "padic/core.hpp"

using padic::PadicContext;
using padic::PadicInt;

TEST_CASE("reduce") {
  CHECK(PadicInt(PadicContext(2, 4), 13).reduce(2) == 1);
  CHECK(PadicInt(PadicContext(5, 3), 0).reduce(1) == 0);
  CHECK(PadicInt(PadicContext(3, 3), 26).reduce(2) == 8);
  const PadicInt z(PadicContext(3, 3), 26);
  CHECK_THROWS_AS(z.reduce(0), padic::PrecisionError);
  CHECK_THROWS_AS(z.reduce(4), padic::PrecisionError);
}

TEST_CASE("digits") {
  using V = std::vector<std::uint64_t>;
  CHECK(PadicInt(PadicContext(2, 4), 13).digits() == V{1, 0, 1, 1});
  CHECK(PadicInt(PadicContext(5, 3), 0).digits() == V{0, 0, 0});
  CHECK(PadicInt(PadicContext(3, 3), 17).digits() == V{2, 2, 1});
}

TEST_CASE("valuation") {
  CHECK(PadicInt(PadicContext(2, 4), 12).valuation() == 2);
  CHECK(PadicInt(PadicContext(5, 3), 0).valuation() == 3);
  CHECK(PadicInt(PadicContext(3, 4), 18).valuation() == 2);
}

TEST_CASE("ring operations") {
  const PadicContext c2(2, 4), c5(5, 3), c3(3, 2);
  CHECK(PadicInt(c2, 13) + PadicInt(c2, 5) == PadicInt(c2, 2));
  CHECK(PadicInt(c5, 2).pow(20ul).residue() == oracle::powmod(2, 20, 125));
  CHECK(PadicInt(c5, 2).pow(20ul).residue() == 76);
  CHECK((PadicInt(c3, 4) * PadicInt(c3, 7)).residue() == 1);
  CHECK((PadicInt(c3, -1)).residue() == 8);
  CHECK_THROWS_AS(PadicInt(c2, 1) + PadicInt(PadicContext(2, 5), 1), padic::ContextMismatch);
}

TEST_CASE("contexts") {
  CHECK_THROWS_AS(PadicContext(4, 3), padic::DomainError);
  CHECK_THROWS_AS(PadicContext(1, 3), padic::DomainError);
  CHECK_THROWS_AS(PadicContext(5, 0), padic::PrecisionError);
  CHECK(PadicContext(7, 2).modulus() == 49);
}

TEST_CASE("inverse of units") {
  CHECK(PadicInt(PadicContext(5, 2), 2).inverse_unit().residue() == 13);
  CHECK(PadicInt(PadicContext(2, 3), 1).inverse_unit().residue() == 1);
  CHECK(PadicInt(PadicContext(3, 2), 8).inverse_unit().residue() == 8);
  CHECK_THROWS_AS(PadicInt(PadicContext(3, 2), 6).inverse_unit(), padic::NotInvertible);
  // Extended-gcd free oracle: search the inverse.
  for (std::uint64_t a = 1; a < 49; ++a) {
    if (a % 7 == 0) continue;
    std::uint64_t inv = 0;
    while (a * inv % 49 != 1) ++inv;
    CHECK(PadicInt(PadicContext(7, 2), static_cast<long>(a)).inverse_unit().residue() == inv);
  }
}

TEST_CASE("exact division by powers of p") {
  const PadicInt a = PadicInt(PadicContext(2, 4), 12).exact_div_p(2);
  CHECK(a.residue() == 3);
  CHECK(a.precision() == 2);
  const PadicInt b = PadicInt(PadicContext(5, 3), 0).exact_div_p(1);
  CHECK(b.residue() == 0);
  CHECK(b.precision() == 2);
  const PadicInt c = PadicInt(PadicContext(3, 4), 54).exact_div_p(3);
  CHECK(c.residue() == 2);
  CHECK(c.precision() == 1);
  CHECK_THROWS_AS(PadicInt(PadicContext(3, 4), 10).exact_div_p(1), padic::InexactDivision);
  CHECK_THROWS_AS(PadicInt(PadicContext(3, 4), 0).exact_div_p(4), padic::PrecisionError);
}

TEST_CASE("factorial valuations") {
  CHECK(padic::val_factorial(6, 2) == 4);
  CHECK(padic::val_factorial(0, 5) == 0);
  CHECK(padic::val_factorial(10, 5) == 2);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    std::uint64_t direct = 0;
    for (std::uint64_t i = 1; i <= 50; ++i) {
      for (std::uint64_t j = i; j % p == 0; j /= p) ++direct;
      CHECK(padic::val_factorial(i, p) == direct);
    }
  }
}

TEST_CASE("truncation index") {
  CHECK(padic::truncation_index(2, 4) == 6);
  CHECK(padic::truncation_index(5, 1) == 5);
  CHECK(padic::truncation_index(2, 1) == 2);
  for (std::uint64_t p : {2, 3, 5}) {
    for (unsigned K = 1; K <= 20; ++K) {
      std::uint64_t i = 0;
      while (padic::val_factorial(i, p) < K) ++i;
      CHECK(padic::truncation_index(p, K) == i);
    }
  }
}

TEST_CASE("ring laws at large precision") {
  std::mt19937_64 rng(11);
  for (std::uint64_t p : {2, 3, 5, 7}) {
    const PadicContext ctx(p, 64);
    auto random = [&] {
      mpz_class z = 0;
      for (int i = 0; i < 64; ++i) z = z * static_cast<unsigned long>(p) + rng() % p;
      return PadicInt(ctx, z);
    };
    for (int trial = 0; trial < 200; ++trial) {
      const PadicInt a = random(), b = random(), c = random();
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a - b) + b == a);
      mpz_class back = 0;
      const auto d = a.digits();
      for (std::size_t i = d.size(); i-- > 0;) back = back * static_cast<unsigned long>(p) + d[i];
      CHECK(back == a.residue());
      CHECK((a * b).valuation() == std::min(a.valuation() + b.valuation(), 64u));
    }
  }
}

TEST_CASE("reduction is consistent and exact division undoes multiplication") {
  std::mt19937_64 rng(12);
  for (std::uint64_t p : {2, 3, 5}) {
    const unsigned K = 12;
    const PadicContext ctx(p, K);
    for (int trial = 0; trial < 200; ++trial) {
      const PadicInt z(ctx, static_cast<long>(rng() % 1000000));
      const unsigned j = 1 + rng() % K;
      const unsigned i = 1 + rng() % j;
      CHECK(z.truncate(j).reduce(i) == z.reduce(i));
      const unsigned t = rng() % K;
      CHECK(z.mul_p(t).exact_div_p(t).residue() == z.reduce(K - t));
    }
  }
}
