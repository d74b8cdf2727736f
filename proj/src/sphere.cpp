#include "padic/sphere.hpp"

#include <algorithm>
#include <optional>

#include "padic/analysis.hpp"
#include "padic/core.hpp"
#include "padic/errors.hpp"
#include "padic/evaluator.hpp"
#include "padic/limits.hpp"

namespace padic::sphere {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t kWordLimit = std::uint64_t{1} << 62;

// Residue model of a sphere at level k with (s, S) indexing.
struct Model {
  Model(const Sphere& sph, unsigned k_) : p(sph.p), r(sph.r), k(k_) {
    if (sph.r == 0) throw LevelError("sphere radius exponent must be >= 1");
    if (k <= r) {
      throw LevelError("sphere level k=" + std::to_string(k) + " must exceed r=" +
                       std::to_string(r));
    }
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    const mpz_class pk_big = pow_p(p, k);
    if (pk_big > mpz_class(static_cast<unsigned long>(kWordLimit))) {
      throw ResourceError("sphere level " + std::to_string(k) + " exceeds the word range");
    }
    pk = pk_big.get_ui();
    pr = pow_p(p, r).get_ui();
    width = pow_p(p, k - r - 1).get_ui();
    size = (p - 1) * width;
    if (size > state_limit()) {
      throw ResourceError("sphere at level " + std::to_string(k) + " has " +
                          std::to_string(size) + " residues, above the state limit");
    }
    mpz_class ym = sph.y % pk_big;
    if (ym < 0) ym += pk_big;
    y = ym.get_ui();
  }

  std::uint64_t residue(std::uint64_t idx) const {
    const std::uint64_t s = idx / width + 1;
    const std::uint64_t S = idx % width;
    return (y + pr * s + pr * p * S) % pk;
  }

  std::optional<std::uint64_t> index(std::uint64_t z) const {
    const std::uint64_t d = (z % pk + pk - y) % pk;
    if (d % pr != 0) return std::nullopt;
    const std::uint64_t q = d / pr;
    const std::uint64_t s = q % p;
    if (s == 0) return std::nullopt;
    return (s - 1) * width + q / p;
  }

  std::uint64_t p;
  unsigned r;
  unsigned k;
  std::uint64_t pk = 0;
  std::uint64_t pr = 0;
  std::uint64_t width = 0;
  std::uint64_t size = 0;
  std::uint64_t y = 0;
};

void require_univariate(const FunctionSpec& f) {
  if (f.arity() != 1 || f.coarity() != 1) {
    throw ArityError("sphere dynamics needs a univariate function: " + f.to_string());
  }
}

// Successor indices of the sphere residues, or the witness of a residue
// that leaves the sphere.
struct Step {
  std::vector<std::uint64_t> next;
  std::optional<json> escape;
};

Step sphere_step(const Evaluator& e, const Model& m) {
  Step out;
  out.next.resize(m.size);
  for (std::uint64_t idx = 0; idx < m.size; ++idx) {
    const std::uint64_t z = m.residue(idx);
    const std::uint64_t fz = e.word(z);
    const auto j = m.index(fz);
    if (!j) {
      out.escape = json{{"level", m.k}, {"x", z}, {"f_x", fz}};
      out.next.clear();
      return out;
    }
    out.next[idx] = *j;
  }
  return out;
}

// Null when `next` is one cycle through all of its points.
std::optional<json> single_cycle_failure(const std::vector<std::uint64_t>& next) {
  const std::uint64_t n = next.size();
  std::uint64_t x = 0;
  for (std::uint64_t step = 1; step <= n; ++step) {
    x = next[x];
    if (x == 0) {
      if (step == n) return std::nullopt;
      break;
    }
  }
  std::vector<std::uint64_t> hit(n, n);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (hit[next[i]] != n) {
      return json{{"bijective", false}, {"collision_indices", {hit[next[i]], i}}};
    }
    hit[next[i]] = i;
  }
  std::vector<bool> seen(n, false);
  std::uint64_t cycles = 0;
  for (std::uint64_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (std::uint64_t z = start; !seen[z]; z = next[z]) seen[z] = true;
  }
  return json{{"bijective", true}, {"cycles", cycles}};
}

std::optional<json> level_failure(const FunctionSpec& f, const Sphere& sph, unsigned k) {
  const Model m(sph, k);
  const Evaluator e(f, PadicContext(sph.p, k));
  Step step = sphere_step(e, m);
  if (step.escape) {
    (*step.escape)["invariant"] = false;
    return step.escape;
  }
  if (auto w = single_cycle_failure(step.next)) {
    (*w)["level"] = k;
    return w;
  }
  return std::nullopt;
}

bool fixed_mod_pr(const FunctionSpec& f, const Sphere& sph) {
  const PadicContext ctx(sph.p, sph.r);
  const PadicInt y(ctx, sph.y);
  return evaluate(f, y) == y;
}

std::vector<std::uint64_t> factor(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q != 0) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::vector<std::uint64_t> sphere_residues(const Sphere& sphere, unsigned k) {
  const Model m(sphere, k);
  std::vector<std::uint64_t> out(m.size);
  for (std::uint64_t i = 0; i < m.size; ++i) out[i] = m.residue(i);
  return out;
}

Verdict is_sphere_invariant(const FunctionSpec& f, const Sphere& sphere, unsigned k) {
  const Stopwatch clock;
  require_univariate(f);
  const Model m(sphere, k);
  Verdict v = make_verdict("sphere_invariant", sphere.p, {k});
  const Evaluator e(f, PadicContext(sphere.p, k));
  const Step step = sphere_step(e, m);
  v.status = step.escape ? Status::fails : Status::holds;
  v.witness = step.escape ? *step.escape : json::object();
  v.witness["f_y_congruent_y_mod_p_r"] = fixed_mod_pr(f, sphere);
  return clock.stamp(v);
}

Verdict sphere_single_cycle(const FunctionSpec& f, const Sphere& sphere, unsigned k) {
  const Stopwatch clock;
  require_univariate(f);
  const Model m(sphere, k);
  Verdict v = make_verdict("sphere_single_cycle", sphere.p, {k});
  const Evaluator e(f, PadicContext(sphere.p, k));
  const Step step = sphere_step(e, m);
  if (step.escape) throw DomainError("sphere is not invariant: " + step.escape->dump());
  if (auto w = single_cycle_failure(step.next)) {
    (*w)["level"] = k;
    v.status = Status::fails;
    v.witness = std::move(*w);
  } else {
    v.status = Status::holds;
    v.witness = {{"cycle_length", m.size}};
  }
  return clock.stamp(v);
}

Verdict sphere_ergodic_bruteforce(const FunctionSpec& f, const Sphere& sphere, unsigned k_max) {
  const Stopwatch clock;
  require_univariate(f);
  if (k_max <= sphere.r) throw LevelError("k_max must exceed r");
  Verdict v = make_verdict("sphere_ergodic_bruteforce", sphere.p, {});
  for (unsigned k = sphere.r + 1; k <= k_max; ++k) {
    v.levels.push_back(k);
    if (auto w = level_failure(f, sphere, k)) {
      v.status = Status::fails;
      v.witness = std::move(*w);
      return clock.stamp(v);
    }
  }
  v.status = Status::holds;
  return clock.stamp(v);
}

std::uint64_t multiplicative_order(const mpz_class& g, std::uint64_t modulus) {
  if (modulus < 2) throw DomainError("modulus must be >= 2");
  const mpz_class mod(static_cast<unsigned long>(modulus));
  mpz_class gm = g % mod;
  if (gm < 0) gm += mod;
  mpz_class gcd;
  mpz_gcd(gcd.get_mpz_t(), gm.get_mpz_t(), mod.get_mpz_t());
  if (gcd != 1) throw DomainError(g.get_str() + " is not a unit mod " + std::to_string(modulus));
  std::uint64_t phi = modulus;
  for (std::uint64_t q : factor(modulus)) phi = phi / q * (q - 1);
  std::uint64_t order = phi;
  for (std::uint64_t q : factor(phi)) {
    while (order % q == 0) {
      mpz_class t;
      mpz_powm_ui(t.get_mpz_t(), gm.get_mpz_t(), order / q, mod.get_mpz_t());
      if (t != 1) break;
      order /= q;
    }
  }
  return order;
}

bool is_primitive_mod_p2(const mpz_class& g, std::uint64_t p) {
  if (mpz_divisible_ui_p(g.get_mpz_t(), p)) return false;
  return multiplicative_order(g, p * p) == p * (p - 1);
}

unsigned analytic_r_min(const FunctionSpec& f, std::uint64_t p) {
  unsigned r_min = p > 3 ? 1 : 2;
  const ClassInfo cls = f.classify(p);
  if (cls.cls == FunctionClass::A) r_min = std::max(r_min, cls.n + 3);
  return r_min;
}

SphereVerdict sphere_ergodic_analytic(const FunctionSpec& f, const Sphere& sphere) {
  const Stopwatch clock;
  require_univariate(f);
  const std::uint64_t p = sphere.p;
  const unsigned r = sphere.r;
  SphereVerdict v;
  static_cast<Verdict&>(v) = make_verdict("sphere_ergodic_analytic", p, {r + 1, r + 2});
  if (f.classify(p).cls == FunctionClass::Lipschitz) {
    v.status = Status::inconclusive;
    v.witness = {{"reason", "function class outside A"}};
    return clock.stamp(v);
  }
  SphereTrace trace;
  trace.r_min = analytic_r_min(f, p);
  if (r < trace.r_min) {
    v.status = Status::inconclusive;
    v.witness = {{"reason", "radius exponent below threshold"}, {"r_min", trace.r_min}};
    v.trace = trace;
    return clock.stamp(v);
  }

  const PadicContext fine(p, r + 2);
  const PadicInt y(fine, sphere.y);
  const PadicInt fy = evaluate(f, y);
  const unsigned shift = (fy - y).valuation();

  const PadicContext dctx(p, std::max(2u, r + 2));
  const PadicInt yd(dctx, sphere.y);
  const PadicInt d = derivative_at(f, yd);
  if (const Poly* poly = f.as<Poly>()) {
    const PadicInt sym = poly_derivative_at(*poly, yd);
    if (!(sym == d)) {
      throw CrossCheckFailure("numeric derivative " + d.residue().get_str() +
                              " disagrees with symbolic " + sym.residue().get_str());
    }
  }
  const std::uint64_t p2 = p * p;
  trace.f_at_y_level = r + 2;
  trace.f_at_y_residue = fy.residue().get_str();
  trace.fprime_mod_p2 = mpz_class(d.reduce(2)).get_ui();
  const bool unit = trace.fprime_mod_p2 % p != 0;
  trace.order = unit ? multiplicative_order(trace.fprime_mod_p2, p2) : 0;
  trace.primitive = unit && trace.order == p * (p - 1);

  bool holds;
  if (p == 2) {
    const bool c1 = shift >= r + 1;
    const bool c2 = shift < r + 2;
    const bool c3 = trace.fprime_mod_p2 % 4 == 1;
    holds = c1 && c2 && c3;
    v.witness = {{"f_y_equiv_y_mod_2^(r+1)", c1},
                 {"f_y_not_equiv_y_mod_2^(r+2)", c2},
                 {"fprime_equiv_1_mod_4", c3}};
  } else {
    const bool c1 = shift >= r + 1;
    holds = c1 && trace.primitive;
    v.witness = {{"f_y_equiv_y_mod_p^(r+1)", c1}, {"fprime_primitive_mod_p^2", trace.primitive}};
  }
  v.status = holds ? Status::holds : Status::fails;
  v.trace = trace;

  if (p == 3 && r == 2) {
    const Verdict bf = sphere_ergodic_bruteforce(f, sphere, r + 4);
    v.witness["advisory"] = true;
    v.witness["analytic_status"] = to_string(v.status);
    v.witness["bruteforce"] = to_json(bf);
    v.levels = bf.levels;
    v.status = bf.status;
  }
  return clock.stamp(v);
}

Verdict sphere_cycle_conditions(const FunctionSpec& f, const Sphere& sphere, unsigned t) {
  const Stopwatch clock;
  require_univariate(f);
  if (t == 0) throw LevelError("depth t must be >= 1");
  const std::uint64_t p = sphere.p;
  const unsigned r = sphere.r;
  const unsigned k = r + t + 1;
  Verdict v = make_verdict("sphere_cycle_conditions", p, {r + 1, k});

  const Model top(sphere, k);
  const Evaluator e(f, PadicContext(p, k));
  const Step step = sphere_step(e, top);
  if (step.escape) throw DomainError("sphere is not invariant: " + step.escape->dump());

  // (1): the induced permutation of s at level r+1; index of s is s - 1.
  const Model base(sphere, r + 1);
  std::vector<std::uint64_t> on_s(p - 1);
  for (std::uint64_t i = 0; i < p - 1; ++i) {
    on_s[i] = *base.index(top.residue(step.next[i * top.width]) % base.pk);
  }
  const bool cond1 = !single_cycle_failure(on_s).has_value();

  // (2): f^(p-1) restricted to each ball.
  std::vector<std::uint64_t> g(top.size);
  for (std::uint64_t i = 0; i < top.size; ++i) {
    std::uint64_t z = i;
    for (std::uint64_t j = 0; j + 1 < p; ++j) z = step.next[z];
    g[i] = z;
  }
  json per_s = json::array();
  bool some = false;
  bool all = true;
  for (std::uint64_t s = 0; s < p - 1; ++s) {
    std::vector<std::uint64_t> ball(top.width);
    bool stays = true;
    for (std::uint64_t S = 0; S < top.width; ++S) {
      const std::uint64_t target = g[s * top.width + S];
      if (target / top.width != s) {
        stays = false;
        break;
      }
      ball[S] = target % top.width;
    }
    const bool cyc = stays && !single_cycle_failure(ball).has_value();
    per_s.push_back({{"s", s + 1}, {"stays_in_ball", stays}, {"single_cycle", cyc}});
    some = some || cyc;
    all = all && cyc;
  }
  v.witness = {{"condition_1", cond1},
               {"condition_2", per_s},
               {"condition_2_some_s", some},
               {"condition_2_all_s", all},
               {"some_all_agree", some == all},
               {"depth", t}};
  v.status = cond1 && all ? Status::holds : Status::fails;
  return clock.stamp(v);
}

Verdict all_small_spheres_verdict(const FunctionSpec& f, const mpz_class& y, std::uint64_t p,
                                  unsigned K) {
  const Stopwatch clock;
  require_univariate(f);
  Verdict v = make_verdict("all_small_spheres", p, {K});
  if (p == 2) {
    v.status = Status::fails;
    v.witness = {{"code", "p2_requires_moving_center"},
                 {"explanation",
                  "for p = 2 ergodicity on a small sphere needs f(y) != y mod 2^(r+2), "
                  "so no function is ergodic on all small spheres around y"}};
    return clock.stamp(v);
  }
  if (f.classify(p).cls == FunctionClass::Lipschitz) {
    throw DomainError("all_small_spheres_verdict needs a function in B or A: " + f.to_string());
  }
  const PadicContext ctx(p, K);
  const PadicInt yk(ctx, y);
  const PadicInt fy = evaluate(f, yk);
  const bool fixed = fy == yk;
  const PadicInt d = derivative_at(f, PadicInt(ctx.with_precision(std::max(K, 2u)), y));
  const std::uint64_t dp2 = mpz_class(d.reduce(2)).get_ui();
  const bool primitive = is_primitive_mod_p2(dp2, p);
  v.status = fixed && primitive ? Status::holds : Status::fails;
  v.witness = {{"fixed_point_at_precision", fixed},
               {"f_y", fy.residue().get_str()},
               {"fprime_mod_p2", dp2},
               {"primitive", primitive}};
  return clock.stamp(v);
}

Verdict perturbed_monomial_verdict(unsigned ell, const FunctionSpec& u, unsigned r,
                                   std::uint64_t p) {
  const Stopwatch clock;
  Verdict v = make_verdict("perturbed_monomial", p, {});
  v.witness = {{"ell", ell}, {"r", r}, {"u", u.to_string()}};
  if (r <= 1) {
    v.status = Status::inconclusive;
    v.witness["reason"] = "criterion needs r > 1";
    return clock.stamp(v);
  }
  const bool unit = ell % p != 0;
  const std::uint64_t order = unit ? multiplicative_order(ell, p * p) : 0;
  const bool primitive = unit && order == p * (p - 1);
  v.witness["order_mod_p2"] = order;
  v.witness["group_order"] = p * (p - 1);
  v.witness["primitive"] = primitive;
  v.status = primitive ? Status::holds : Status::fails;
  return clock.stamp(v);
}

}  // namespace padic::sphere
