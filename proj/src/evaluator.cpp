#include "padic/evaluator.hpp"

#include <functional>
#include <string>
#include <variant>

#include "rings.hpp"

namespace padic {
namespace {

using detail::BigRing;
using detail::WordRing;

template <class R>
using Fn = std::function<typename R::value(std::span<const typename R::value>)>;

template <class R>
class Compiler {
 public:
  using V = typename R::value;

  explicit Compiler(const R& ring) : ring_(ring) {}

  Fn<R> compile(const FunctionSpec& f) const {
    const R& ring = ring_;
    const std::uint64_t p = ring.p();
    if (const auto* poly = f.as<Poly>()) {
      std::vector<V> c;
      for (const auto& a : poly->coeffs) c.push_back(ring.from(a));
      return [&ring, c](std::span<const V> x) {
        V acc = ring.zero();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = ring.add(ring.mul(acc, x[0]), *it);
        return acc;
      };
    }
    if (const auto* e = f.as<Expr>()) return compile_expr(*e->root);
    if (const auto* bs = f.as<BSeries>()) {
      const std::uint64_t limit = truncation_index(p, ring.digits());
      std::vector<V> b;
      for (std::size_t i = 0; i < bs->b.size() && i < limit; ++i) b.push_back(ring.from(bs->b[i]));
      std::vector<V> shifts;
      for (std::size_t i = 0; i < b.size(); ++i) shifts.push_back(ring.from(mpz_class(static_cast<unsigned long>(i))));
      return [&ring, b, shifts](std::span<const V> x) {
        V acc = ring.zero();
        V falling = ring.one();
        for (std::size_t i = 0; i < b.size(); ++i) {
          acc = ring.add(acc, ring.mul(b[i], falling));
          falling = ring.mul(falling, ring.sub(x[0], shifts[i]));
        }
        return acc;
      };
    }
    if (const auto* a = f.as<AWrap>()) {
      Fn<R> inner = compile(*a->inner);
      const unsigned n = a->n;
      return [&ring, inner, n](std::span<const V> x) {
        V v = inner(x);
        if (!ring.divisible(v, n)) {
          throw NotInClassA("inner value " + ring.to_mpz(v).get_str() + " at x=" +
                            ring.to_mpz(x[0]).get_str() + " is not divisible by p^" +
                            std::to_string(n));
        }
        return ring.div_p(v, n);
      };
    }
    if (const auto* m = f.as<PerturbedMonomial>()) {
      Fn<R> u = compile(*m->u);
      const V scale = ring.from(pow_p(p, m->r + 1));
      const unsigned ell = m->ell;
      return [&ring, u, scale, ell](std::span<const V> x) {
        return ring.add(ring.pow(x[0], ell), ring.mul(scale, u(x)));
      };
    }
    if (const auto* c = f.as<ClosedFormErgodic>()) {
      Fn<R> v = compile(*c->v);
      const V pv = ring.from(pow_p(p, 1));
      return [&ring, v, pv](std::span<const V> x) {
        const V x1 = ring.add(x[0], ring.one());
        const V diff = ring.sub(v(std::span<const V>(&x1, 1)), v(x.first(1)));
        return ring.add(x1, ring.mul(pv, diff));
      };
    }
    if (const auto* m = f.as<ErgodicMahler2>()) return compile_mahler2(f, *m);
    if (const auto* c = f.as<Compose>()) {
      Fn<R> outer = compile(*c->outer);
      Fn<R> inner = compile(*c->inner);
      return [outer, inner](std::span<const V> x) {
        const V y = inner(x.first(1));
        return outer(std::span<const V>(&y, 1));
      };
    }
    if (const auto* it = f.as<Iterate>()) {
      Fn<R> g = compile(*it->f);
      const unsigned n = it->n;
      return [g, n](std::span<const V> x) {
        V y = x[0];
        for (unsigned i = 0; i < n; ++i) y = g(std::span<const V>(&y, 1));
        return y;
      };
    }
    throw ArityError("tuple cannot be used as a scalar function");
  }

 private:
  Fn<R> compile_expr(const ExprNode& e) const {
    const R& ring = ring_;
    using Op = ExprNode::Op;
    switch (e.op) {
      case Op::Var: {
        const unsigned i = e.var - 1;
        return [i](std::span<const V> x) {
          if (i >= x.size()) throw ArityError("variable x" + std::to_string(i + 1) + " not supplied");
          return x[i];
        };
      }
      case Op::Const: {
        const V c = ring.from(e.value);
        return [c](std::span<const V>) { return c; };
      }
      case Op::Pow: {
        Fn<R> a = compile_expr(*e.lhs);
        const unsigned k = e.exponent;
        return [&ring, a, k](std::span<const V> x) { return ring.pow(a(x), k); };
      }
      case Op::Not: {
        Fn<R> a = compile_expr(*e.lhs);
        return [&ring, a](std::span<const V> x) { return ring.bnot(a(x)); };
      }
      default: break;
    }
    Fn<R> a = compile_expr(*e.lhs);
    Fn<R> b = compile_expr(*e.rhs);
    switch (e.op) {
      case Op::Add: return [&ring, a, b](std::span<const V> x) { return ring.add(a(x), b(x)); };
      case Op::Sub: return [&ring, a, b](std::span<const V> x) { return ring.sub(a(x), b(x)); };
      case Op::Mul: return [&ring, a, b](std::span<const V> x) { return ring.mul(a(x), b(x)); };
      case Op::And: return [&ring, a, b](std::span<const V> x) { return ring.band(a(x), b(x)); };
      case Op::Or: return [&ring, a, b](std::span<const V> x) { return ring.bor(a(x), b(x)); };
      default: return [&ring, a, b](std::span<const V> x) { return ring.bxor(a(x), b(x)); };
    }
  }

  struct MahlerTerm {
    V coeff;             // c_i * 2^e_i
    V odd_inverse;       // inverse of the odd part of i!
    unsigned two_power;  // v_2(i!)
    V shift;             // i - 1, for the falling factorial step
  };

  Fn<R> compile_mahler2(const FunctionSpec& f, const ErgodicMahler2& m) const {
    const R& ring = ring_;
    const unsigned M = ring.digits();
    // The value is only needed modulo 2^(M - headroom); terms divisible by
    // that power vanish.
    const unsigned meaningful = M - std::min(M, f.headroom(2));
    const mpz_class mod = pow_p(2, M);
    std::vector<MahlerTerm> terms;
    mpz_class odd_fact = 1;
    unsigned fact_twos = 0;
    std::size_t last_used = 0;
    for (std::size_t j = 0; j < m.c.size(); ++j) {
      const unsigned long i = j + 1;
      unsigned long odd = i;
      while (odd % 2 == 0) {
        odd /= 2;
        ++fact_twos;
      }
      odd_fact *= odd;
      mpz_class inv;
      mpz_invert(inv.get_mpz_t(), odd_fact.get_mpz_t(), mod.get_mpz_t());
      const unsigned e = mahler2_exponent(i);
      const bool vanishes = m.c[j] == 0 || e >= meaningful;
      terms.push_back({vanishes ? ring.zero() : ring.from(mpz_class(m.c[j] * pow_p(2, e))),
                       ring.from(inv), fact_twos, ring.from(mpz_class(i - 1))});
      if (!vanishes) last_used = j + 1;
    }
    terms.resize(last_used);
    return [&ring, terms](std::span<const V> x) {
      V acc = ring.add(ring.one(), x[0]);
      V falling = ring.one();
      for (const auto& t : terms) {
        falling = ring.mul(falling, ring.sub(x[0], t.shift));
        if (t.coeff == ring.zero()) continue;
        const V binom = ring.div_p(ring.mul(falling, t.odd_inverse), t.two_power);
        acc = ring.add(acc, ring.mul(t.coeff, binom));
      }
      return acc;
    };
  }

  const R& ring_;
};

template <class R>
struct Program {
  Program(const FunctionSpec& f, std::uint64_t p, unsigned M) : ring(std::make_unique<R>(p, M)) {
    Compiler<R> compiler(*ring);
    if (const auto* t = f.as<Tuple>()) {
      for (const auto& c : t->components) outputs.push_back(compiler.compile(c));
    } else {
      outputs.push_back(compiler.compile(f));
    }
  }

  // Closures hold references to the ring; keep its address stable.
  std::unique_ptr<R> ring;
  std::vector<Fn<R>> outputs;
};

}  // namespace

struct Evaluator::Impl {
  std::variant<Program<WordRing>, Program<BigRing>> program;
  mpz_class out_modulus;
  std::uint64_t out_modulus_word = 0;  // 0 when p^K >= 2^64
  bool word_outputs = false;            // p^K <= 2^64
  unsigned working_digits;
};

Evaluator::Evaluator(const FunctionSpec& f, PadicContext ctx, Backend backend)
    : ctx_(std::move(ctx)), arity_(f.arity()), coarity_(f.coarity()) {
  const std::uint64_t p = ctx_.p();
  if (p != 2 && f.requires_p2()) {
    throw DomainError("bitwise and 2-adic constructors require p = 2: " + f.to_string());
  }
  const unsigned M = ctx_.precision() + f.headroom(p);
  const bool word = backend == Backend::word ||
                    (backend == Backend::automatic && WordRing::fits(p, M));
  if (backend == Backend::word && !WordRing::fits(p, M)) {
    throw ResourceError("p^" + std::to_string(M) + " does not fit the word backend");
  }
  auto impl = std::make_shared<Impl>(Impl{
      word ? decltype(Impl::program)(std::in_place_type<Program<WordRing>>, f, p, M)
           : decltype(Impl::program)(std::in_place_type<Program<BigRing>>, f, p, M),
      ctx_.modulus(), 0, false, M});
  const mpz_class two64 = mpz_class(std::uint64_t{1} << 63) * 2;
  impl->word_outputs = ctx_.modulus() <= two64;
  if (ctx_.modulus() < two64) impl->out_modulus_word = mpz_class(ctx_.modulus()).get_ui();
  impl_ = std::move(impl);
}

unsigned Evaluator::working_digits() const noexcept { return impl_->working_digits; }

bool Evaluator::uses_word_ring() const noexcept {
  return std::holds_alternative<Program<WordRing>>(impl_->program);
}

std::vector<PadicInt> Evaluator::operator()(std::span<const PadicInt> x) const {
  if (x.size() < arity_) {
    throw ArityError("expected " + std::to_string(arity_) + " arguments, got " + std::to_string(x.size()));
  }
  for (const auto& xi : x) {
    if (xi.p() != ctx_.p()) throw ContextMismatch("argument prime differs from evaluator prime");
    if (xi.precision() < ctx_.precision()) {
      throw PrecisionError("argument precision " + std::to_string(xi.precision()) +
                           " below evaluation precision " + std::to_string(ctx_.precision()));
    }
  }
  return std::visit(
      [&](const auto& prog) {
        std::vector<typename std::decay_t<decltype(*prog.ring)>::value> args;
        for (const auto& xi : x) args.push_back(prog.ring->from(xi.residue()));
        std::vector<PadicInt> out;
        for (const auto& fn : prog.outputs) out.emplace_back(ctx_, prog.ring->to_mpz(fn(args)));
        return out;
      },
      impl_->program);
}

PadicInt Evaluator::operator()(const PadicInt& x) const {
  if (coarity_ != 1) throw ArityError("scalar evaluation of a tuple");
  return (*this)(std::span<const PadicInt>(&x, 1)).front();
}

void Evaluator::word(std::span<const std::uint64_t> x, std::span<std::uint64_t> out) const {
  if (x.size() < arity_ || out.size() < coarity_) throw ArityError("word evaluation: span sizes");
  if (!impl_->word_outputs) throw ResourceError("p^K does not fit a machine word");
  const std::uint64_t m = impl_->out_modulus_word;
  if (const auto* prog = std::get_if<Program<WordRing>>(&impl_->program)) {
    std::uint64_t args[8];
    std::vector<std::uint64_t> heap;
    std::uint64_t* a = args;
    if (x.size() > 8) {
      heap.resize(x.size());
      a = heap.data();
    }
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = prog->ring->from_word(x[i]);
    const std::span<const std::uint64_t> in(a, x.size());
    for (std::size_t j = 0; j < prog->outputs.size(); ++j) out[j] = prog->outputs[j](in) % m;
    return;
  }
  const auto& prog = std::get<Program<BigRing>>(impl_->program);
  std::vector<mpz_class> args;
  for (auto xi : x) args.push_back(prog.ring->from_word(xi));
  for (std::size_t j = 0; j < prog.outputs.size(); ++j) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), prog.outputs[j](args).get_mpz_t(), impl_->out_modulus.get_mpz_t());
    std::uint64_t w = 0;
    mpz_export(&w, nullptr, -1, sizeof(w), 0, 0, r.get_mpz_t());
    out[j] = w;
  }
}

std::uint64_t Evaluator::word(std::uint64_t x) const {
  if (coarity_ != 1) throw ArityError("scalar evaluation of a tuple");
  std::uint64_t out = 0;
  word(std::span<const std::uint64_t>(&x, 1), std::span<std::uint64_t>(&out, 1));
  return out;
}

PadicInt evaluate(const FunctionSpec& f, const PadicInt& x) { return Evaluator(f, x.ctx())(x); }

std::vector<PadicInt> evaluate(const FunctionSpec& f, std::span<const PadicInt> x) {
  if (x.empty()) throw ArityError("no arguments");
  return Evaluator(f, x.front().ctx())(x);
}

PadicInt iterate_eval(const FunctionSpec& f, const PadicInt& x, unsigned n) {
  const Evaluator e(f, x.ctx());
  PadicInt y = x;
  for (unsigned i = 0; i < n; ++i) y = e(y);
  return y;
}

PadicInt binomial_at(const PadicInt& x, std::uint64_t i) {
  const std::uint64_t p = x.p();
  const unsigned K = x.precision();
  const unsigned v = static_cast<unsigned>(val_factorial(i, p));
  const PadicContext lifted = x.ctx().with_precision(K + v);
  PadicInt falling(lifted, 1);
  mpz_class unit_part = 1;
  for (std::uint64_t j = 0; j < i; ++j) {
    falling = falling * PadicInt(lifted, mpz_class(x.residue() - static_cast<unsigned long>(j)));
    std::uint64_t factor = j + 1;
    while (factor % p == 0) factor /= p;
    unit_part *= static_cast<unsigned long>(factor);
  }
  const PadicInt scaled = falling * PadicInt(lifted, unit_part).inverse_unit();
  if (v == 0) return PadicInt(x.ctx(), scaled.residue());
  if (scaled.valuation() < v) {
    throw InexactDivision("falling factorial lost divisibility by i! (precision lift bug)");
  }
  return scaled.exact_div_p(v);
}

}  // namespace padic
