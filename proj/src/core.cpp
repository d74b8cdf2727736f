#include "padic/core.hpp"

#include <string>

namespace padic {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
  return mpz_probab_prime_p(z.get_mpz_t(), 40) != 0;
}

mpz_class pow_p(std::uint64_t p, unsigned e) {
  mpz_class base;
  mpz_import(base.get_mpz_t(), 1, 1, sizeof(p), 0, 0, &p);
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

PadicContext::PadicContext(std::uint64_t p, unsigned K) : p_(p), K_(K) {
  if (!is_prime(p)) throw DomainError("modulus base " + std::to_string(p) + " is not prime");
  if (K == 0) throw PrecisionError("working precision must be at least 1");
  modulus_ = std::make_shared<const mpz_class>(pow_p(p, K));
}

PadicContext PadicContext::with_precision(unsigned K) const { return PadicContext(p_, K); }

PadicInt::PadicInt(PadicContext ctx, const mpz_class& value) : ctx_(std::move(ctx)) {
  mpz_fdiv_r(residue_.get_mpz_t(), value.get_mpz_t(), ctx_.modulus().get_mpz_t());
}

mpz_class PadicInt::reduce(unsigned j) const {
  if (j == 0 || j > precision()) {
    throw PrecisionError("reduction level " + std::to_string(j) + " outside [1, " +
                         std::to_string(precision()) + "]");
  }
  if (j == precision()) return residue_;
  mpz_class out;
  mpz_fdiv_r(out.get_mpz_t(), residue_.get_mpz_t(), pow_p(p(), j).get_mpz_t());
  return out;
}

PadicInt PadicInt::truncate(unsigned j) const {
  return PadicInt(ctx_.with_precision(j), reduce(j), true);
}

std::vector<std::uint64_t> PadicInt::digits() const {
  std::vector<std::uint64_t> out;
  out.reserve(precision());
  mpz_class rest = residue_;
  const mpz_class base = pow_p(p(), 1);
  for (unsigned i = 0; i < precision(); ++i) {
    mpz_class digit;
    mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), base.get_mpz_t());
    out.push_back(digit.get_ui());
  }
  return out;
}

unsigned valuation_of(const mpz_class& z, std::uint64_t p, unsigned cap) {
  if (z == 0) return cap;
  const mpz_class base = pow_p(p, 1);
  mpz_class rest = z;
  unsigned v = 0;
  while (v < cap && mpz_divisible_p(rest.get_mpz_t(), base.get_mpz_t())) {
    mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), base.get_mpz_t());
    ++v;
  }
  return v;
}

unsigned PadicInt::valuation() const { return valuation_of(residue_, p(), precision()); }

namespace {

void require_same(const PadicInt& a, const PadicInt& b) {
  if (!(a.ctx() == b.ctx())) {
    throw ContextMismatch("operands carry different contexts (p=" + std::to_string(a.p()) +
                          ",K=" + std::to_string(a.precision()) + " vs p=" +
                          std::to_string(b.p()) + ",K=" + std::to_string(b.precision()) + ")");
  }
}

}  // namespace

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
  require_same(a, b);
  return PadicInt(a.ctx(), mpz_class(a.residue() + b.residue()));
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) {
  require_same(a, b);
  return PadicInt(a.ctx(), mpz_class(a.residue() - b.residue()));
}

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
  require_same(a, b);
  return PadicInt(a.ctx(), mpz_class(a.residue() * b.residue()));
}

PadicInt PadicInt::operator-() const { return PadicInt(ctx_, mpz_class(-residue_)); }

PadicInt PadicInt::pow(const mpz_class& exponent) const {
  if (exponent < 0) throw DomainError("negative exponent");
  mpz_class out;
  mpz_powm(out.get_mpz_t(), residue_.get_mpz_t(), exponent.get_mpz_t(),
           ctx_.modulus().get_mpz_t());
  return PadicInt(ctx_, std::move(out), true);
}

PadicInt PadicInt::inverse_unit() const {
  mpz_class out;
  if (valuation() != 0 ||
      mpz_invert(out.get_mpz_t(), residue_.get_mpz_t(), ctx_.modulus().get_mpz_t()) == 0) {
    throw NotInvertible(residue_.get_str() + " is not a unit modulo " + std::to_string(p()) +
                        "^" + std::to_string(precision()));
  }
  return PadicInt(ctx_, std::move(out), true);
}

PadicInt PadicInt::exact_div_p(unsigned t) const {
  if (t >= precision()) {
    throw PrecisionError("cannot divide by p^" + std::to_string(t) + " at precision " +
                         std::to_string(precision()));
  }
  if (valuation() < t) {
    throw InexactDivision(residue_.get_str() + " is not divisible by " + std::to_string(p()) +
                          "^" + std::to_string(t));
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), residue_.get_mpz_t(), pow_p(p(), t).get_mpz_t());
  return PadicInt(ctx_.with_precision(precision() - t), q);
}

PadicInt PadicInt::mul_p(unsigned t) const {
  return PadicInt(ctx_, mpz_class(residue_ * pow_p(p(), t)));
}

std::ostream& operator<<(std::ostream& os, const PadicInt& z) {
  return os << z.residue() << " (mod " << z.p() << "^" << z.precision() << ")";
}

std::uint64_t val_factorial(std::uint64_t i, std::uint64_t p) {
  std::uint64_t total = 0;
  for (std::uint64_t q = i / p; q > 0; q /= p) total += q;
  return total;
}

std::uint64_t truncation_index(std::uint64_t p, unsigned K) {
  // v_p(i!) only increases at multiples of p.
  std::uint64_t i = p;
  while (val_factorial(i, p) < K) i += p;
  return i;
}

}  // namespace padic
