#pragma once

// Compatible functions Z_p^n -> Z_p^m as an immutable AST.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace padic {

class FunctionSpec;

/// Expression tree for infix bodies that do not fold into a univariate
/// polynomial: bitwise 2-adic expressions and multivariate components.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum class Op { Var, Const, Add, Sub, Mul, Pow, And, Or, Xor, Not };

  Op op;
  unsigned var = 0;         // Var: 1-based variable index
  mpz_class value;          // Const
  unsigned exponent = 0;    // Pow
  ExprPtr lhs, rhs;         // rhs unused for Pow and Not

  static ExprPtr variable(unsigned index);
  static ExprPtr constant(mpz_class v);
  static ExprPtr binary(Op op, ExprPtr a, ExprPtr b);
  static ExprPtr power(ExprPtr base, unsigned e);
  static ExprPtr bit_not(ExprPtr a);
};

bool operator==(const ExprNode& a, const ExprNode& b);

/// Sum of coeffs[i] * x^i.
struct Poly {
  std::vector<mpz_class> coeffs;
};

/// Expression tree (bitwise and/or multivariate).
struct Expr {
  ExprPtr root;
};

/// Sum of b[i] * x(x-1)...(x-i+1).
struct BSeries {
  std::vector<mpz_class> b;
};

/// p^-n * inner; the inner values must be divisible by p^n.
struct AWrap {
  unsigned n;
  std::shared_ptr<const FunctionSpec> inner;
};

/// x^ell + p^(r+1) * u(x).
struct PerturbedMonomial {
  unsigned ell;
  unsigned r;
  std::shared_ptr<const FunctionSpec> u;
};

/// 1 + x + p * (v(x+1) - v(x)).
struct ClosedFormErgodic {
  std::shared_ptr<const FunctionSpec> v;
};

/// 1 + x + sum_{i>=1} c_i * 2^(floor(log2(i+1))+1) * binomial(x, i); c[0] is c_1.
struct ErgodicMahler2 {
  std::vector<mpz_class> c;
};

/// outer(inner(x)).
struct Compose {
  std::shared_ptr<const FunctionSpec> outer;
  std::shared_ptr<const FunctionSpec> inner;
};

/// n-fold iterate.
struct Iterate {
  std::shared_ptr<const FunctionSpec> f;
  unsigned n;
};

/// Multivariate output [F_1, ..., F_m].
struct Tuple {
  std::vector<FunctionSpec> components;
};

enum class FunctionClass {
  B,          // Mahler coefficients a_i with a_i / i! integral
  A,          // compatible with p^n f in B
  Lipschitz,  // compatible, no finer class known (e.g. bitwise)
};

struct ClassInfo {
  FunctionClass cls;
  unsigned n = 0;  // only meaningful for A
};

class FunctionSpec {
 public:
  using Node = std::variant<Poly, Expr, BSeries, AWrap, PerturbedMonomial, ClosedFormErgodic,
                            ErgodicMahler2, Compose, Iterate, Tuple>;

  FunctionSpec(Node node);

  static FunctionSpec poly(std::vector<mpz_class> coeffs);
  static FunctionSpec poly(std::initializer_list<long> coeffs);
  static FunctionSpec expr(ExprPtr root);
  static FunctionSpec bseries(std::vector<mpz_class> b);
  static FunctionSpec awrap(unsigned n, FunctionSpec inner);
  static FunctionSpec perturbed(unsigned ell, unsigned r, FunctionSpec u);
  static FunctionSpec closed_ergodic(FunctionSpec v);
  static FunctionSpec mahler2(std::vector<mpz_class> c);
  static FunctionSpec compose(FunctionSpec outer, FunctionSpec inner);
  static FunctionSpec iterate(FunctionSpec f, unsigned n);
  static FunctionSpec tuple(std::vector<FunctionSpec> components);

  const Node& node() const noexcept { return *node_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }

  /// Number of input variables (largest variable index used, at least 1).
  unsigned arity() const;
  /// Number of output components.
  unsigned coarity() const;
  /// True if any bitwise operator or 2-adic-only constructor occurs.
  bool requires_p2() const;

  /// Class membership deduced structurally for the given prime.
  ClassInfo classify(std::uint64_t p) const;

  /// Extra base-p digits needed internally to evaluate modulo p^K exactly.
  unsigned headroom(std::uint64_t p) const;

  /// DSL text that parses back to a structurally equal spec.
  std::string to_string() const;

  friend bool operator==(const FunctionSpec& a, const FunctionSpec& b);

 private:
  std::shared_ptr<const Node> node_;
};

/// Trims trailing zero coefficients (keeps at least the constant term).
std::vector<mpz_class> normalize_coeffs(std::vector<mpz_class> coeffs);

/// Exponent floor(log2(i+1)) + 1 used by the 2-adic Mahler form.
unsigned mahler2_exponent(std::uint64_t i);

}  // namespace padic
