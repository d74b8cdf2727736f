#include "padic/function.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "padic/core.hpp"
#include "padic/errors.hpp"

namespace padic {

ExprPtr ExprNode::variable(unsigned index) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Var;
  n->var = index;
  return n;
}

ExprPtr ExprNode::constant(mpz_class v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = std::move(v);
  return n;
}

ExprPtr ExprNode::binary(Op op, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

ExprPtr ExprNode::power(ExprPtr base, unsigned e) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Pow;
  n->lhs = std::move(base);
  n->exponent = e;
  return n;
}

ExprPtr ExprNode::bit_not(ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Not;
  n->lhs = std::move(a);
  return n;
}

bool operator==(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  using Op = ExprNode::Op;
  switch (a.op) {
    case Op::Var: return a.var == b.var;
    case Op::Const: return a.value == b.value;
    case Op::Pow: return a.exponent == b.exponent && *a.lhs == *b.lhs;
    case Op::Not: return *a.lhs == *b.lhs;
    default: return *a.lhs == *b.lhs && *a.rhs == *b.rhs;
  }
}

namespace {

bool same(const std::shared_ptr<const FunctionSpec>& a, const std::shared_ptr<const FunctionSpec>& b) {
  return *a == *b;
}
}  // namespace

bool operator==(const Poly& a, const Poly& b) { return a.coeffs == b.coeffs; }
bool operator==(const Expr& a, const Expr& b) { return *a.root == *b.root; }
bool operator==(const BSeries& a, const BSeries& b) { return a.b == b.b; }
bool operator==(const AWrap& a, const AWrap& b) { return a.n == b.n && same(a.inner, b.inner); }
bool operator==(const PerturbedMonomial& a, const PerturbedMonomial& b) {
  return a.ell == b.ell && a.r == b.r && same(a.u, b.u);
}
bool operator==(const ClosedFormErgodic& a, const ClosedFormErgodic& b) { return same(a.v, b.v); }
bool operator==(const ErgodicMahler2& a, const ErgodicMahler2& b) { return a.c == b.c; }
bool operator==(const Compose& a, const Compose& b) {
  return same(a.outer, b.outer) && same(a.inner, b.inner);
}
bool operator==(const Iterate& a, const Iterate& b) { return a.n == b.n && same(a.f, b.f); }
bool operator==(const Tuple& a, const Tuple& b) { return a.components == b.components; }

namespace {


template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::shared_ptr<const FunctionSpec> share(FunctionSpec f) {
  return std::make_shared<const FunctionSpec>(std::move(f));
}

unsigned expr_arity(const ExprNode& e) {
  switch (e.op) {
    case ExprNode::Op::Var: return e.var;
    case ExprNode::Op::Const: return 1;
    case ExprNode::Op::Pow:
    case ExprNode::Op::Not: return expr_arity(*e.lhs);
    default: return std::max(expr_arity(*e.lhs), expr_arity(*e.rhs));
  }
}

bool expr_bitwise(const ExprNode& e) {
  using Op = ExprNode::Op;
  switch (e.op) {
    case Op::Var:
    case Op::Const: return false;
    case Op::And:
    case Op::Or:
    case Op::Xor:
    case Op::Not: return true;
    case Op::Pow: return expr_bitwise(*e.lhs);
    default: return expr_bitwise(*e.lhs) || expr_bitwise(*e.rhs);
  }
}

void require_univariate(const FunctionSpec& f, const char* where) {
  if (f.arity() > 1 || f.coarity() > 1) {
    throw ArityError(std::string(where) + " expects a univariate function, got " + f.to_string());
  }
}

ClassInfo join(ClassInfo a, ClassInfo b) {
  if (a.cls == FunctionClass::Lipschitz || b.cls == FunctionClass::Lipschitz) {
    return {FunctionClass::Lipschitz, 0};
  }
  const unsigned n = std::max(a.cls == FunctionClass::A ? a.n : 0u, b.cls == FunctionClass::A ? b.n : 0u);
  return n == 0 ? ClassInfo{FunctionClass::B, 0} : ClassInfo{FunctionClass::A, n};
}

/// Class of p^s * g for g of class c.
ClassInfo scaled(ClassInfo c, unsigned s) {
  if (c.cls != FunctionClass::A) return c;
  return c.n <= s ? ClassInfo{FunctionClass::B, 0} : ClassInfo{FunctionClass::A, c.n - s};
}

void print_int_list(std::ostream& os, const std::vector<mpz_class>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
}

void print_expr(std::ostream& os, const ExprNode& e) {
  using Op = ExprNode::Op;
  switch (e.op) {
    case Op::Var: os << 'x' << e.var; return;
    case Op::Const: os << e.value; return;
    case Op::Pow:
      os << '(';
      print_expr(os, *e.lhs);
      os << ")^" << e.exponent;
      return;
    case Op::Not:
      os << "not(";
      print_expr(os, *e.lhs);
      os << ')';
      return;
    case Op::And:
    case Op::Or:
    case Op::Xor:
      os << (e.op == Op::And ? "and(" : e.op == Op::Or ? "or(" : "xor(");
      print_expr(os, *e.lhs);
      os << ", ";
      print_expr(os, *e.rhs);
      os << ')';
      return;
    default:
      os << '(';
      print_expr(os, *e.lhs);
      os << (e.op == Op::Add ? " + " : e.op == Op::Sub ? " - " : " * ");
      print_expr(os, *e.rhs);
      os << ')';
      return;
  }
}

}  // namespace

std::vector<mpz_class> normalize_coeffs(std::vector<mpz_class> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.emplace_back(0);
  return coeffs;
}

unsigned mahler2_exponent(std::uint64_t i) {
  return static_cast<unsigned>(std::bit_width(i + 1));
}

FunctionSpec::FunctionSpec(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

FunctionSpec FunctionSpec::poly(std::vector<mpz_class> coeffs) {
  return FunctionSpec(Poly{normalize_coeffs(std::move(coeffs))});
}

FunctionSpec FunctionSpec::poly(std::initializer_list<long> coeffs) {
  std::vector<mpz_class> v;
  for (long c : coeffs) v.emplace_back(c);
  return poly(std::move(v));
}

FunctionSpec FunctionSpec::expr(ExprPtr root) { return FunctionSpec(Expr{std::move(root)}); }

FunctionSpec FunctionSpec::bseries(std::vector<mpz_class> b) {
  if (b.empty()) throw DomainError("bseries needs at least one coefficient");
  return FunctionSpec(BSeries{std::move(b)});
}

FunctionSpec FunctionSpec::awrap(unsigned n, FunctionSpec inner) {
  require_univariate(inner, "awrap");
  return FunctionSpec(AWrap{n, share(std::move(inner))});
}

FunctionSpec FunctionSpec::perturbed(unsigned ell, unsigned r, FunctionSpec u) {
  if (ell == 0 || r == 0) throw DomainError("perturb requires ell >= 1 and r >= 1");
  require_univariate(u, "perturb");
  return FunctionSpec(PerturbedMonomial{ell, r, share(std::move(u))});
}

FunctionSpec FunctionSpec::closed_ergodic(FunctionSpec v) {
  require_univariate(v, "closed_ergodic");
  return FunctionSpec(ClosedFormErgodic{share(std::move(v))});
}

FunctionSpec FunctionSpec::mahler2(std::vector<mpz_class> c) {
  if (c.empty()) throw DomainError("mahler2 needs at least one coefficient");
  return FunctionSpec(ErgodicMahler2{std::move(c)});
}

FunctionSpec FunctionSpec::compose(FunctionSpec outer, FunctionSpec inner) {
  require_univariate(outer, "compose");
  require_univariate(inner, "compose");
  return FunctionSpec(Compose{share(std::move(outer)), share(std::move(inner))});
}

FunctionSpec FunctionSpec::iterate(FunctionSpec f, unsigned n) {
  if (n == 0) throw DomainError("iterate count must be at least 1");
  require_univariate(f, "iterate");
  return FunctionSpec(Iterate{share(std::move(f)), n});
}

FunctionSpec FunctionSpec::tuple(std::vector<FunctionSpec> components) {
  if (components.empty()) throw ArityError("tuple needs at least one component");
  for (const auto& c : components) {
    if (c.coarity() != 1) throw ArityError("tuple components must be scalar");
  }
  return FunctionSpec(Tuple{std::move(components)});
}

unsigned FunctionSpec::arity() const {
  return std::visit(overloaded{
                        [](const Expr& e) { return expr_arity(*e.root); },
                        [](const Tuple& t) {
                          unsigned a = 1;
                          for (const auto& c : t.components) a = std::max(a, c.arity());
                          return a;
                        },
                        [](const auto&) { return 1u; },
                    },
                    *node_);
}

unsigned FunctionSpec::coarity() const {
  if (const auto* t = as<Tuple>()) return static_cast<unsigned>(t->components.size());
  return 1;
}

bool FunctionSpec::requires_p2() const {
  return std::visit(overloaded{
                        [](const Expr& e) { return expr_bitwise(*e.root); },
                        [](const ErgodicMahler2&) { return true; },
                        [](const AWrap& a) { return a.inner->requires_p2(); },
                        [](const PerturbedMonomial& m) { return m.u->requires_p2(); },
                        [](const ClosedFormErgodic& c) { return c.v->requires_p2(); },
                        [](const Compose& c) { return c.outer->requires_p2() || c.inner->requires_p2(); },
                        [](const Iterate& it) { return it.f->requires_p2(); },
                        [](const Tuple& t) {
                          return std::any_of(t.components.begin(), t.components.end(),
                                             [](const FunctionSpec& c) { return c.requires_p2(); });
                        },
                        [](const auto&) { return false; },
                    },
                    *node_);
}

ClassInfo FunctionSpec::classify(std::uint64_t p) const {
  constexpr ClassInfo kB{FunctionClass::B, 0};
  constexpr ClassInfo kL{FunctionClass::Lipschitz, 0};
  return std::visit(
      overloaded{
          [&](const Poly&) { return kB; },
          [&](const BSeries&) { return kB; },
          [&](const Expr& e) { return expr_bitwise(*e.root) ? kL : kB; },
          [&](const AWrap& a) {
            const ClassInfo in = a.inner->classify(p);
            if (in.cls == FunctionClass::Lipschitz) return kL;
            const unsigned n = a.n + (in.cls == FunctionClass::A ? in.n : 0);
            return n == 0 ? kB : ClassInfo{FunctionClass::A, n};
          },
          [&](const PerturbedMonomial& m) { return scaled(m.u->classify(p), m.r + 1); },
          [&](const ClosedFormErgodic& c) { return scaled(c.v->classify(p), 1); },
          [&](const ErgodicMahler2& m) {
            if (p != 2) return kL;
            unsigned need = 0;
            for (std::size_t j = 0; j < m.c.size(); ++j) {
              if (m.c[j] == 0) continue;
              const std::uint64_t i = j + 1;
              const std::uint64_t have = mahler2_exponent(i) + valuation_of(m.c[j], 2, 1u << 20);
              const std::uint64_t want = val_factorial(i, 2);
              if (want > have) need = std::max<unsigned>(need, static_cast<unsigned>(want - have));
            }
            return need == 0 ? kB : ClassInfo{FunctionClass::A, need};
          },
          [&](const Compose& c) {
            const ClassInfo outer = c.outer->classify(p);
            const ClassInfo inner = c.inner->classify(p);
            if (inner.cls != FunctionClass::B) return kL;
            return outer;
          },
          [&](const Iterate& it) {
            const ClassInfo f = it.f->classify(p);
            if (it.n == 1 || f.cls == FunctionClass::B) return f;
            return kL;
          },
          [&](const Tuple& t) {
            ClassInfo acc = kB;
            for (const auto& c : t.components) acc = join(acc, c.classify(p));
            return acc;
          },
      },
      *node_);
}

unsigned FunctionSpec::headroom(std::uint64_t p) const {
  return std::visit(
      overloaded{
          [&](const AWrap& a) { return a.n + a.inner->headroom(p); },
          [&](const PerturbedMonomial& m) { return m.u->headroom(p); },
          [&](const ClosedFormErgodic& c) { return c.v->headroom(p); },
          [&](const ErgodicMahler2& m) {
            unsigned h = 0;
            for (std::size_t j = 0; j < m.c.size(); ++j) {
              const std::uint64_t i = j + 1;
              const std::uint64_t v = val_factorial(i, 2);
              const unsigned e = mahler2_exponent(i);
              if (v > e) h = std::max<unsigned>(h, static_cast<unsigned>(v - e));
            }
            return h;
          },
          [&](const Compose& c) { return c.outer->headroom(p) + c.inner->headroom(p); },
          [&](const Iterate& it) { return it.n * it.f->headroom(p); },
          [&](const Tuple& t) {
            unsigned h = 0;
            for (const auto& c : t.components) h = std::max(h, c.headroom(p));
            return h;
          },
          [](const auto&) { return 0u; },
      },
      *node_);
}

std::string FunctionSpec::to_string() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Poly& poly) {
                   bool first = true;
                   for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
                     const mpz_class& c = poly.coeffs[i];
                     if (c == 0) continue;
                     if (!first) os << " + ";
                     first = false;
                     if (i == 0) {
                       os << c;
                       continue;
                     }
                     if (c != 1) os << c << '*';
                     os << 'x';
                     if (i > 1) os << '^' << i;
                   }
                   if (first) os << '0';
                 },
                 [&](const Expr& e) { print_expr(os, *e.root); },
                 [&](const BSeries& b) {
                   os << "bseries(";
                   print_int_list(os, b.b);
                   os << ')';
                 },
                 [&](const AWrap& a) { os << "awrap(" << a.n << ", " << a.inner->to_string() << ')'; },
                 [&](const PerturbedMonomial& m) {
                   os << "perturb(ell=" << m.ell << ", r=" << m.r << ", u=" << m.u->to_string() << ')';
                 },
                 [&](const ClosedFormErgodic& c) { os << "closed_ergodic(" << c.v->to_string() << ')'; },
                 [&](const ErgodicMahler2& m) {
                   os << "mahler2(";
                   print_int_list(os, m.c);
                   os << ')';
                 },
                 [&](const Compose& c) {
                   os << "compose(" << c.outer->to_string() << ", " << c.inner->to_string() << ')';
                 },
                 [&](const Iterate& it) { os << "iterate(" << it.f->to_string() << ", " << it.n << ')'; },
                 [&](const Tuple& t) {
                   os << '[';
                   for (std::size_t i = 0; i < t.components.size(); ++i) {
                     os << (i ? ", " : "") << t.components[i].to_string();
                   }
                   os << ']';
                 },
             },
             *node_);
  return os.str();
}

bool operator==(const FunctionSpec& a, const FunctionSpec& b) {
  return a.node_ == b.node_ || *a.node_ == *b.node_;
}

}  // namespace padic
