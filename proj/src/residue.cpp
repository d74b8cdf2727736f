#include "padic/residue.hpp"

#include <algorithm>
#include <ostream>
#include <random>

#include "domain.hpp"
#include "padic/analysis.hpp"
#include "padic/errors.hpp"
#include "padic/evaluator.hpp"

namespace padic::residue {

namespace {

using detail::ipow;
using json = nlohmann::json;

void require_univariate(const InducedMap& map, const char* what) {
  if (map.n != 1 || map.m != 1) {
    throw ArityError(std::string(what) + " needs a univariate map, got " + std::to_string(map.n) +
                     " -> " + std::to_string(map.m));
  }
}

void require_univariate(const FunctionSpec& f, const char* what) {
  if (f.arity() != 1 || f.coarity() != 1) {
    throw ArityError(std::string(what) + " needs a univariate function: " + f.to_string());
  }
}

// Level-j view of a univariate table built at level k >= j.
std::uint64_t at(const InducedMap& map, std::uint64_t pj, std::uint64_t x) {
  return map.table[x] % pj;
}

std::optional<json> collision_at(const InducedMap& map, unsigned j) {
  const std::uint64_t pj = ipow(map.p, j);
  std::vector<std::uint64_t> first(pj, pj);
  for (std::uint64_t x = 0; x < pj; ++x) {
    const std::uint64_t v = at(map, pj, x);
    if (first[v] != pj) {
      return json{{"level", j}, {"collision", {first[v], x}}, {"image", v}};
    }
    first[v] = x;
  }
  return std::nullopt;
}

// Steps until the orbit of 0 first returns to 0, or 0 if it never does
// within pj steps.
std::uint64_t orbit_return(const InducedMap& map, std::uint64_t pj) {
  std::uint64_t x = 0;
  for (std::uint64_t step = 1; step <= pj; ++step) {
    x = at(map, pj, x);
    if (x == 0) return step;
  }
  return 0;
}

std::vector<Cycle> cycles_at(const InducedMap& map, unsigned j) {
  const std::uint64_t pj = ipow(map.p, j);
  std::vector<bool> seen(pj, false);
  std::vector<Cycle> out;
  for (std::uint64_t start = 0; start < pj; ++start) {
    if (seen[start]) continue;
    std::uint64_t len = 0;
    std::uint64_t x = start;
    while (!seen[x]) {
      seen[x] = true;
      ++len;
      x = at(map, pj, x);
    }
    // start is the smallest unseen element, hence the minimum of its cycle.
    out.push_back({len, start});
  }
  return out;
}

// Null when transitive at level j, otherwise the witness.
std::optional<json> transitivity_failure(const InducedMap& map, unsigned j) {
  const std::uint64_t pj = ipow(map.p, j);
  if (orbit_return(map, pj) == pj) return std::nullopt;
  if (auto c = collision_at(map, j)) {
    (*c)["bijective"] = false;
    return c;
  }
  const auto cycles = cycles_at(map, j);
  return json{{"level", j}, {"bijective", true}, {"cycles", cycles.size()}};
}

std::optional<json> not_compatible(const FunctionSpec& f, std::uint64_t p, unsigned k,
                                   InducedMap& map) {
  map = induced_table(f, p, k, false);
  if (auto w = compatibility_violation(map)) {
    (*w)["compatible"] = false;
    return w;
  }
  return std::nullopt;
}

unsigned exhaustive_levels(std::uint64_t p, unsigned K) {
  unsigned j = 0;
  std::uint64_t size = 1;
  while (j < K && size <= state_limit() / p) {
    size *= p;
    ++j;
  }
  return j;
}

}  // namespace

InducedMap induced_table(const FunctionSpec& f, std::uint64_t p, unsigned k, bool check_compat) {
  if (k == 0) throw LevelError("induced_table needs k >= 1");
  InducedMap map;
  map.p = p;
  map.k = k;
  map.n = f.arity();
  map.m = f.coarity();
  const detail::Domain dom(p, k, map.n, "induced_table");
  map.modulus = dom.modulus;
  const Evaluator e(f, PadicContext(p, k));
  map.table = detail::tabulate(e, dom);
  if (check_compat) {
    if (auto w = compatibility_violation(map)) {
      throw NotCompatible(f.to_string() + " is not compatible mod " + std::to_string(p) + "^" +
                          std::to_string(k) + ": " + w->dump());
    }
  }
  return map;
}

std::optional<json> compatibility_violation(const InducedMap& map) {
  const detail::Domain dom(map.p, map.k, map.n, "compatibility");
  std::vector<std::uint64_t> x(map.n), xr(map.n);
  for (std::uint64_t idx = 1; idx < dom.size; ++idx) {
    dom.decode(idx, x);
    unsigned t = 0;
    for (std::uint64_t xi : x) {
      unsigned d = 0;
      for (std::uint64_t v = xi; v != 0; v /= map.p) ++d;
      t = std::max(t, d);
    }
    if (t < 2) continue;
    const std::uint64_t pt = ipow(map.p, t - 1);
    for (unsigned i = 0; i < map.n; ++i) xr[i] = x[i] % pt;
    const std::uint64_t ridx = dom.encode(xr);
    for (unsigned c = 0; c < map.m; ++c) {
      const std::uint64_t a = map.table[idx * map.m + c];
      const std::uint64_t b = map.table[ridx * map.m + c];
      if (a % pt != b % pt) {
        return json{{"x", x},          {"x_reduced", xr}, {"level", t - 1},
                    {"component", c},  {"f_x", a},        {"f_x_reduced", b}};
      }
    }
  }
  return std::nullopt;
}

std::map<std::uint64_t, CycleStructure::LengthClass> CycleStructure::by_length() const {
  std::map<std::uint64_t, LengthClass> out;
  for (const Cycle& c : cycles) {
    auto [it, fresh] = out.try_emplace(c.length, LengthClass{c.representative, 0});
    ++it->second.count;
    it->second.representative = std::min(it->second.representative, c.representative);
  }
  return out;
}

CycleStructure cycle_structure(const InducedMap& map) {
  require_univariate(map, "cycle_structure");
  if (auto c = collision_at(map, map.k)) {
    throw DomainError("cycle_structure needs a permutation: " + c->dump());
  }
  CycleStructure cs;
  cs.p = map.p;
  cs.k = map.k;
  cs.cycles = cycles_at(map, map.k);
  cs.total = map.modulus;
  return cs;
}

CycleStructure cycle_structure(const FunctionSpec& f, std::uint64_t p, unsigned k) {
  return cycle_structure(induced_table(f, p, k));
}

void write_cycles_csv(std::ostream& out, const CycleStructure& cs) {
  out << "k,cycle_length,representative,count\n";
  for (const auto& [len, cls] : cs.by_length()) {
    out << cs.k << ',' << len << ',' << cls.representative << ',' << cls.count << '\n';
  }
}

Verdict is_bijective_mod(const InducedMap& map) {
  const Stopwatch clock;
  require_univariate(map, "is_bijective_mod");
  Verdict v = make_verdict("bijective", map.p, {map.k});
  if (auto c = collision_at(map, map.k)) {
    v.status = Status::fails;
    v.witness = std::move(*c);
  } else {
    v.status = Status::holds;
  }
  return clock.stamp(v);
}

Verdict is_bijective_mod(const FunctionSpec& f, std::uint64_t p, unsigned k) {
  require_univariate(f, "is_bijective_mod");
  return is_bijective_mod(induced_table(f, p, k));
}

Verdict is_transitive_mod(const InducedMap& map) {
  const Stopwatch clock;
  require_univariate(map, "is_transitive_mod");
  Verdict v = make_verdict("transitive", map.p, {map.k});
  if (auto w = transitivity_failure(map, map.k)) {
    v.status = Status::fails;
    v.witness = std::move(*w);
  } else {
    v.status = Status::holds;
  }
  return clock.stamp(v);
}

Verdict is_transitive_mod(const FunctionSpec& f, std::uint64_t p, unsigned k) {
  require_univariate(f, "is_transitive_mod");
  return is_transitive_mod(induced_table(f, p, k));
}

Verdict measure_preserving_verdict(const FunctionSpec& f, std::uint64_t p, unsigned k_max) {
  const Stopwatch clock;
  require_univariate(f, "measure_preserving_verdict");
  if (k_max == 0) throw LevelError("k_max must be >= 1");
  Verdict v = make_verdict("measure_preserving", p, {});
  InducedMap map;
  if (auto w = not_compatible(f, p, k_max, map)) {
    v.status = Status::fails;
    v.witness = std::move(*w);
    return clock.stamp(v);
  }
  for (unsigned j = 1; j <= k_max; ++j) {
    v.levels.push_back(j);
    if (auto c = collision_at(map, j)) {
      v.status = Status::fails;
      v.witness = std::move(*c);
      return clock.stamp(v);
    }
  }
  v.status = Status::holds;
  return clock.stamp(v);
}

Verdict ergodic_verdict_bruteforce(const FunctionSpec& f, std::uint64_t p, unsigned k_max) {
  const Stopwatch clock;
  require_univariate(f, "ergodic_verdict_bruteforce");
  if (k_max == 0) throw LevelError("k_max must be >= 1");
  Verdict v = make_verdict("ergodic_bruteforce", p, {});
  InducedMap map;
  if (auto w = not_compatible(f, p, k_max, map)) {
    v.status = Status::fails;
    v.witness = std::move(*w);
    return clock.stamp(v);
  }
  for (unsigned j = 1; j <= k_max; ++j) {
    v.levels.push_back(j);
    if (auto w = transitivity_failure(map, j)) {
      v.status = Status::fails;
      v.witness = std::move(*w);
      return clock.stamp(v);
    }
  }
  v.status = Status::holds;
  return clock.stamp(v);
}

unsigned critical_level(std::uint64_t p) { return p <= 3 ? 3 : 2; }

Verdict ergodic_verdict_B(const FunctionSpec& f, std::uint64_t p) {
  const Stopwatch clock;
  require_univariate(f, "ergodic_verdict_B");
  if (f.classify(p).cls != FunctionClass::B) {
    throw DomainError("ergodic_verdict_B needs a B-class function: " + f.to_string());
  }
  const unsigned k = critical_level(p);
  Verdict v = make_verdict("ergodic_B", p, {k});
  const InducedMap map = induced_table(f, p, k);
  if (auto w = transitivity_failure(map, k)) {
    v.status = Status::fails;
    v.witness = std::move(*w);
  } else {
    v.status = Status::holds;
  }
  return clock.stamp(v);
}

Verdict affine_transitivity(const mpz_class& alpha, const mpz_class& beta, std::uint64_t p,
                            unsigned k) {
  const Stopwatch clock;
  if (k == 0) throw LevelError("affine_transitivity needs k >= 1");
  Verdict v = make_verdict("affine_transitivity", p, {k});
  const mpz_class pz(static_cast<unsigned long>(p));
  const mpz_class slope_modulus = (p == 2 && k >= 2) ? mpz_class(4) : pz;
  const mpz_class a = ((alpha % pz) + pz) % pz;
  const mpz_class b = ((beta % slope_modulus) + slope_modulus) % slope_modulus;
  const bool alpha_unit = a != 0;
  const bool beta_one = b == 1;
  v.status = alpha_unit && beta_one ? Status::holds : Status::fails;
  if (v.fails()) {
    v.witness = {{"alpha_mod_p", a.get_ui()},
                 {"beta_mod", b.get_ui()},
                 {"beta_modulus", slope_modulus.get_ui()},
                 {"alpha_unit", alpha_unit},
                 {"beta_is_one", beta_one}};
  }
  return clock.stamp(v);
}

Verdict is_balanced_mod(const FunctionSpec& F, std::uint64_t p, unsigned k) {
  const Stopwatch clock;
  const unsigned n = F.arity();
  const unsigned m = F.coarity();
  if (n < m) {
    throw ArityError("balancedness needs n >= m, got n=" + std::to_string(n) +
                     ", m=" + std::to_string(m));
  }
  if (k == 0) throw LevelError("is_balanced_mod needs k >= 1");
  Verdict v = make_verdict("balanced", p, {k});
  const detail::Domain dom(p, k, n, "is_balanced_mod");
  const detail::Domain codom(p, k, m, "is_balanced_mod codomain");
  const Evaluator e(F, PadicContext(p, k));
  std::vector<std::uint64_t> counts(codom.size, 0);
  std::vector<std::uint64_t> x(n), y(m);
  for (std::uint64_t idx = 0; idx < dom.size; ++idx) {
    dom.decode(idx, x);
    e.word(x, y);
    ++counts[codom.encode(y)];
  }
  const std::uint64_t expected = dom.size / codom.size;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  if (*lo == expected && *hi == expected) {
    v.status = Status::holds;
    v.witness = {{"fiber_size", expected}};
  } else {
    v.status = Status::fails;
    std::vector<std::uint64_t> vlo(m), vhi(m);
    codom.decode(static_cast<std::uint64_t>(lo - counts.begin()), vlo);
    codom.decode(static_cast<std::uint64_t>(hi - counts.begin()), vhi);
    v.witness = {{"level", k},
                 {"expected_fiber_size", expected},
                 {"smallest_fiber", {{"value", vlo}, {"size", *lo}}},
                 {"largest_fiber", {{"value", vhi}, {"size", *hi}}}};
  }
  return clock.stamp(v);
}

Verdict multivariate_mp_verdict(const FunctionSpec& F, std::uint64_t p, unsigned k_max) {
  const Stopwatch clock;
  if (k_max == 0) throw LevelError("k_max must be >= 1");
  Verdict v = make_verdict("measure_preserving_multivariate", p, {});
  for (unsigned j = 1; j <= k_max; ++j) {
    v.levels.push_back(j);
    Verdict level = is_balanced_mod(F, p, j);
    if (level.fails()) {
      v.status = Status::fails;
      v.witness = std::move(level.witness);
      return clock.stamp(v);
    }
  }
  v.status = Status::holds;
  return clock.stamp(v);
}

BallDecomposition preimage_ball_decomposition(const FunctionSpec& F, std::uint64_t p,
                                              const std::vector<std::uint64_t>& b, unsigned s,
                                              unsigned k) {
  const unsigned n = F.arity();
  const unsigned m = F.coarity();
  if (b.size() != m) throw ArityError("target has " + std::to_string(b.size()) +
                                      " components, F has " + std::to_string(m));
  if (s == 0 || s > k) throw LevelError("need 1 <= s <= k");
  const Verdict balanced = multivariate_mp_verdict(F, p, k);
  if (!balanced.holds()) {
    throw DomainError("F is not balanced up to level " + std::to_string(k) + ": " +
                      balanced.witness.dump());
  }
  const std::uint64_t ps = ipow(p, s);
  const detail::Domain dom(p, k, n, "preimage_ball_decomposition");
  const Evaluator e(F, PadicContext(p, k));
  std::map<std::vector<std::uint64_t>, std::uint64_t> cosets;
  std::vector<std::uint64_t> x(n), y(m), a(n);
  BallDecomposition out;
  out.s = s;
  for (std::uint64_t idx = 0; idx < dom.size; ++idx) {
    dom.decode(idx, x);
    e.word(x, y);
    bool hit = true;
    for (unsigned c = 0; c < m; ++c) hit = hit && (y[c] % ps == b[c] % ps);
    if (!hit) continue;
    ++out.preimage_size;
    for (unsigned i = 0; i < n; ++i) a[i] = x[i] % ps;
    ++cosets[a];
  }
  const std::uint64_t coset_size = ipow(p, (k - s) * n);
  const std::uint64_t expected_count = ipow(p, s * (n - m));
  if (cosets.size() != expected_count) {
    throw CrossCheckFailure("preimage splits into " + std::to_string(cosets.size()) +
                            " cosets, expected " + std::to_string(expected_count));
  }
  for (const auto& [rep, count] : cosets) {
    if (count != coset_size) {
      throw CrossCheckFailure("preimage meets a coset in " + std::to_string(count) +
                              " points, expected " + std::to_string(coset_size));
    }
    out.representatives.push_back(rep);
  }
  return out;
}

Verdict isometry_check(const FunctionSpec& f, std::uint64_t p, unsigned K,
                       std::size_t sample_count, std::uint64_t seed) {
  const Stopwatch clock;
  require_univariate(f, "isometry_check");
  Verdict v = make_verdict("isometry", p, {K});
  const unsigned exhaustive = exhaustive_levels(p, K);
  if (exhaustive > 0) {
    const Verdict mp = measure_preserving_verdict(f, p, exhaustive);
    if (!mp.holds()) {
      v.status = Status::inconclusive;
      v.witness = {{"reason", "not measure-preserving"}, {"measure_preserving", to_json(mp)}};
      return clock.stamp(v);
    }
  }
  const PadicContext ctx(p, K);
  const Evaluator e(f, ctx);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> digit(0, p - 1);
  auto random_point = [&] {
    mpz_class z = 0;
    for (unsigned i = 0; i < K; ++i) z = z * static_cast<unsigned long>(p) + digit(rng);
    return PadicInt(ctx, z);
  };
  for (std::size_t i = 0; i < sample_count;) {
    const PadicInt x = random_point();
    const PadicInt y = random_point();
    if (x == y) continue;
    ++i;
    const unsigned dx = (x - y).valuation();
    const unsigned dfx = (e(x) - e(y)).valuation();
    if (dx != dfx) {
      v.status = Status::fails;
      v.witness = {{"x", x.residue().get_str()},
                   {"y", y.residue().get_str()},
                   {"v_x_minus_y", dx},
                   {"v_fx_minus_fy", dfx}};
      return clock.stamp(v);
    }
  }
  v.status = Status::holds;
  v.witness = {{"samples", sample_count}, {"exhaustive_mp_levels", exhaustive}};
  return clock.stamp(v);
}

Verdict check_ergodic_mahler_2adic(const FunctionSpec& f, unsigned K, std::size_t count) {
  const Stopwatch clock;
  require_univariate(f, "check_ergodic_mahler_2adic");
  if (count < 2) throw DomainError("need at least the coefficients a_0 and a_1");
  if (K < 2) throw PrecisionError("the condition on a_1 needs K >= 2");
  const PadicContext ctx(2, K);
  const std::vector<PadicInt> a = mahler_coefficients(f, ctx, count);
  Verdict v = make_verdict("ergodic_mahler_2adic", 2, {K});
  const bool a0_odd = a[0].is_unit();
  const bool a1_ok = a[1].reduce(2) == 1;
  json coeffs = json::array();
  for (const PadicInt& ai : a) coeffs.push_back(ai.residue().get_str());
  v.witness = {{"a", coeffs},
               {"a0_odd", a0_odd},
               {"a0_equals_one", a[0].residue() == 1},
               {"a1_is_1_mod_4", a1_ok}};
  std::optional<std::size_t> violation;
  for (std::size_t i = 2; i < count && !violation; ++i) {
    if (a[i].valuation() < std::min(K, mahler2_exponent(i))) violation = i;
  }
  if (violation) {
    v.witness["first_violation"] = {{"i", *violation},
                                    {"required_valuation", mahler2_exponent(*violation)},
                                    {"valuation", a[*violation].valuation()}};
  }
  v.status = a0_odd && a1_ok && !violation ? Status::holds : Status::fails;
  return clock.stamp(v);
}

Verdict qp_polynomial_ergodic(const std::vector<mpq_class>& coeffs_in, std::uint64_t p) {
  const Stopwatch clock;
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  std::vector<mpq_class> coeffs = coeffs_in;
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.size() < 2) throw DomainError("qp_polynomial_ergodic needs degree >= 1");
  const std::uint64_t d = coeffs.size() - 1;
  unsigned log_d = 0;
  for (std::uint64_t t = p; t <= d; t *= p) ++log_d;
  const unsigned k = log_d + 3;
  Verdict v = make_verdict("qp_polynomial_ergodic", p, {k});
  const std::uint64_t N = checked_states(p, k, "qp_polynomial_ergodic");
  const mpz_class pk = pow_p(p, k);
  const mpz_class pz(static_cast<unsigned long>(p));

  InducedMap map;
  map.p = p;
  map.k = k;
  map.modulus = N;
  map.table.resize(N);
  for (std::uint64_t z = 0; z < N; ++z) {
    mpq_class acc = 0;
    const mpq_class zq(mpz_class(static_cast<unsigned long>(z)));
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * zq + coeffs[i];
    acc.canonicalize();
    if (mpz_divisible_p(acc.get_den_mpz_t(), pz.get_mpz_t())) {
      v.status = Status::fails;
      v.witness = {{"stage", "integrality"}, {"point", z}, {"value", acc.get_str()}};
      return clock.stamp(v);
    }
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), acc.get_den_mpz_t(), pk.get_mpz_t());
    mpz_class r = (acc.get_num() * inv) % pk;
    if (r < 0) r += pk;
    map.table[z] = r.get_ui();
  }
  json witness = {{"integral", true}};
  const auto compat = compatibility_violation(map);
  witness["compatible"] = compat ? *compat : json(true);
  const auto bij = collision_at(map, k);
  witness["bijective"] = bij ? *bij : json(true);
  const auto trans = transitivity_failure(map, k);
  witness["transitive"] = trans ? *trans : json(true);
  if (compat || trans) {
    v.status = Status::fails;
    witness["stage"] = compat ? "compatibility" : "transitivity";
    v.witness = std::move(witness);
  } else {
    v.status = Status::holds;
  }
  return clock.stamp(v);
}

}  // namespace padic::residue
