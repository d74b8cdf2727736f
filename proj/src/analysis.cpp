#include "padic/analysis.hpp"

#include "domain.hpp"
#include "padic/evaluator.hpp"

namespace padic {

std::vector<PadicInt> mahler_coefficients(const FunctionSpec& f, const PadicContext& ctx,
                                          std::size_t count) {
  if (f.arity() != 1 || f.coarity() != 1) throw ArityError("Mahler coefficients need a univariate f");
  const Evaluator e(f, ctx);
  std::vector<PadicInt> diffs;
  diffs.reserve(count);
  for (std::size_t j = 0; j < count; ++j) diffs.push_back(e(PadicInt(ctx, static_cast<long>(j))));
  std::vector<PadicInt> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(diffs.front());
    for (std::size_t j = 0; j + 1 < diffs.size(); ++j) diffs[j] = diffs[j + 1] - diffs[j];
    diffs.pop_back();
  }
  return out;
}

PadicInt mahler_sum(std::span<const PadicInt> a, const PadicInt& x) {
  PadicInt acc(x.ctx(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * binomial_at(x, i);
  return acc;
}

PadicInt derivative_at(const FunctionSpec& f, const PadicInt& y) {
  if (f.arity() != 1 || f.coarity() != 1) throw ArityError("derivative_at needs a univariate f");
  const ClassInfo cls = f.classify(y.p());
  if (cls.cls == FunctionClass::Lipschitz) {
    throw DomainError("derivative needs a B- or A-class function: " + f.to_string());
  }
  const unsigned n = cls.cls == FunctionClass::A ? cls.n : 0;
  const unsigned K = y.precision();
  const unsigned step = K + n;
  const PadicContext wide = y.ctx().with_precision(2 * K + n);
  const Evaluator e(f, wide);
  const PadicInt base(wide, y.residue());
  const PadicInt shifted(wide, mpz_class(y.residue() + pow_p(y.p(), step)));
  const PadicInt diff = e(shifted) - e(base);
  if (diff.valuation() < step) {
    throw NotCompatible("f(y + p^" + std::to_string(step) + ") - f(y) is not divisible by p^" +
                        std::to_string(step) + "; f is not compatible");
  }
  return diff.exact_div_p(step);
}

PadicInt poly_derivative_at(const Poly& f, const PadicInt& y) {
  PadicInt acc(y.ctx(), 0);
  for (std::size_t i = f.coeffs.size(); i-- > 1;) {
    acc = acc * y + PadicInt(y.ctx(), mpz_class(f.coeffs[i] * static_cast<unsigned long>(i)));
  }
  return acc;
}

Verdict compatibility_check(const FunctionSpec& f, const PadicContext& ctx, unsigned k) {
  const Stopwatch clock;
  if (k == 0 || k > ctx.precision()) {
    throw PrecisionError("compatibility level " + std::to_string(k) + " outside [1, " +
                         std::to_string(ctx.precision()) + "]");
  }
  Verdict v = make_verdict("compatibility", ctx.p(), {k});
  const unsigned n = f.arity();
  const unsigned m = f.coarity();
  const detail::Domain dom(ctx.p(), k, n, "compatibility_check");
  const Evaluator e(f, ctx.with_precision(k));
  const std::vector<std::uint64_t> table = detail::tabulate(e, dom);
  std::vector<std::uint64_t> x(n), xr(n);
  for (std::uint64_t idx = 0; idx < dom.size; ++idx) {
    dom.decode(idx, x);
    for (unsigned j = 1; j < k; ++j) {
      const std::uint64_t pj = detail::ipow(ctx.p(), j);
      for (unsigned i = 0; i < n; ++i) xr[i] = x[i] % pj;
      const std::uint64_t ridx = dom.encode(xr);
      for (unsigned c = 0; c < m; ++c) {
        const std::uint64_t a = table[idx * m + c];
        const std::uint64_t b = table[ridx * m + c];
        if (a % pj != b % pj) {
          v.status = Status::fails;
          v.witness = {{"x", x}, {"x_reduced", xr}, {"level", j}, {"component", c},
                       {"f_x", a}, {"f_x_reduced", b}};
          return clock.stamp(v);
        }
      }
    }
  }
  v.status = Status::holds;
  return clock.stamp(v);
}

}  // namespace padic
