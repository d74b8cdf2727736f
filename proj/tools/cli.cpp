#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "padic/core.hpp"
#include "padic/errors.hpp"
#include "padic/evaluator.hpp"
#include "padic/limits.hpp"
#include "padic/parser.hpp"
#include "padic/prng.hpp"
#include "padic/residue.hpp"
#include "padic/sphere.hpp"

namespace padic::cli {

namespace {

using json = nlohmann::json;

mpz_class parse_integer(const std::string& text, const std::string& what) {
  mpz_class z;
  const std::string body = !text.empty() && text[0] == '+' ? text.substr(1) : text;
  if (body.empty() || z.set_str(body, 10) != 0) {
    throw DomainError(what + " must be an integer, got '" + text + "'");
  }
  return z;
}

json residue_json(const mpz_class& z) {
  if (z.fits_ulong_p()) return z.get_ui();
  return z.get_str();
}

void apply_state_limit() {
  const char* env = std::getenv("PADIC_STATE_LIMIT");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || v == 0) {
    throw DomainError(std::string("PADIC_STATE_LIMIT must be a positive integer, got '") + env +
                      "'");
  }
  set_state_limit(v);
}

// Collects verdicts and writes the run report.
struct Report {
  std::string command;
  json config = json::object();
  json verdicts = json::array();
  json notes = json::array();
  // Inconclusive verdicts are neutral as long as some other check decided.
  bool all_hold = true;
  bool any_hold = false;
  bool mismatch = false;
  Stopwatch clock;

  void add(const Verdict& v) {
    verdicts.push_back(to_json(v));
    all_hold = all_hold && !v.fails();
    any_hold = any_hold || v.holds();
  }
  void add(const SphereVerdict& v) {
    verdicts.push_back(to_json(v));
    all_hold = all_hold && !v.fails();
    any_hold = any_hold || v.holds();
  }

  int finish(std::ostream& out, const std::string& path) {
    json j = {{"command", command}, {"config", config}, {"verdicts", verdicts}};
    if (!notes.empty()) j["notes"] = notes;
    if (mismatch) j["mismatch"] = true;
    Verdict dummy;
    clock.stamp(dummy);
    j["elapsed_ms"] = dummy.elapsed_ms;
    if (path.empty()) {
      out << j.dump(2) << '\n';
    } else {
      std::ofstream f(path);
      if (!f) throw DomainError("cannot open " + path + " for writing");
      f << j.dump(2) << '\n';
    }
    if (mismatch) return kMismatch;
    return all_hold && any_hold ? kAllHold : kSomeFail;
  }
};

struct Options {
  std::string fn;
  std::uint64_t p = 2;
  unsigned prec = 8;
  std::vector<std::string> at;
  std::string mode = "ergodic";
  unsigned kmax = 6;
  bool fast = false;
  unsigned k = 1;
  std::string csv;
  std::string center = "0";
  unsigned r = 1;
  std::optional<unsigned> sphere_kmax;
  bool analytic = false;
  unsigned width = 32;
  std::uint64_t seed = 0;
  std::size_t count = 16;
  std::string policy = "full";
  bool audit = false;
  std::string out;
};

int cmd_eval(const Options& o, std::ostream& out) {
  const FunctionSpec f = parse(o.fn);
  const PadicContext ctx(o.p, o.prec);
  if (o.at.size() != f.arity()) {
    throw ArityError(f.to_string() + " takes " + std::to_string(f.arity()) + " argument(s), got " +
                     std::to_string(o.at.size()));
  }
  std::vector<PadicInt> x;
  json at = json::array();
  for (const std::string& s : o.at) {
    x.emplace_back(ctx, parse_integer(s, "--at"));
    at.push_back(residue_json(x.back().residue()));
  }
  const std::vector<PadicInt> y = evaluate(f, x);
  json values = json::array();
  json digits = json::array();
  for (const PadicInt& v : y) {
    values.push_back(residue_json(v.residue()));
    digits.push_back(v.digits());
  }
  json j = {{"command", "eval"}, {"fn", f.to_string()}, {"p", o.p}, {"prec", o.prec}, {"at", at}};
  if (y.size() == 1) {
    j["value"] = values[0];
    j["digits"] = digits[0];
  } else {
    j["value"] = values;
    j["digits"] = digits;
  }
  out << j.dump(2) << '\n';
  return kAllHold;
}

int cmd_check(const Options& o, std::ostream& out) {
  const FunctionSpec f = parse(o.fn);
  Report rep;
  rep.command = "check";
  rep.config = {{"fn", f.to_string()}, {"p", o.p}, {"mode", o.mode}, {"kmax", o.kmax},
                {"fast", o.fast}};
  const bool univariate = f.arity() == 1 && f.coarity() == 1;

  if (o.mode == "balanced" || (o.mode == "mp" && !univariate)) {
    rep.add(residue::multivariate_mp_verdict(f, o.p, o.kmax));
    if (o.fast) rep.notes.push_back("no fast criterion for multivariate maps; oracle only");
    return rep.finish(out, o.out);
  }
  if (!univariate) throw ArityError("--mode " + o.mode + " needs a univariate function");

  if (o.mode == "mp") {
    rep.add(residue::measure_preserving_verdict(f, o.p, o.kmax));
    if (o.fast) rep.notes.push_back("no fast criterion for measure preservation; oracle only");
    return rep.finish(out, o.out);
  }
  if (o.mode != "ergodic") throw DomainError("--mode must be ergodic, mp or balanced");

  if (!o.fast) {
    rep.add(residue::ergodic_verdict_bruteforce(f, o.p, o.kmax));
    return rep.finish(out, o.out);
  }

  // The fast criteria decide ergodicity on Z_p; the oracle must reach the
  // critical level for the comparison to be meaningful.
  const unsigned oracle_levels = std::max(o.kmax, residue::critical_level(o.p));
  if (oracle_levels != o.kmax) {
    rep.notes.push_back("oracle extended to level " + std::to_string(oracle_levels) +
                        " to cover the critical level");
  }
  const Verdict oracle = residue::ergodic_verdict_bruteforce(f, o.p, oracle_levels);
  rep.add(oracle);
  bool any_fast = false;
  if (f.classify(o.p).cls == FunctionClass::B) {
    const Verdict fast = residue::ergodic_verdict_B(f, o.p);
    rep.add(fast);
    rep.mismatch = rep.mismatch || fast.status != oracle.status;
    any_fast = true;
  }
  if (const Poly* poly = f.as<Poly>(); poly && poly->coeffs.size() == 2) {
    const Verdict affine = residue::affine_transitivity(poly->coeffs[0], poly->coeffs[1], o.p,
                                                        std::max(2u, oracle_levels));
    rep.add(affine);
    rep.mismatch = rep.mismatch || affine.status != oracle.status;
    any_fast = true;
  }
  if (!any_fast) rep.notes.push_back("no fast criterion applies to this function; oracle only");
  return rep.finish(out, o.out);
}

int cmd_cycles(const Options& o, std::ostream& out) {
  const FunctionSpec f = parse(o.fn);
  const residue::CycleStructure cs = residue::cycle_structure(f, o.p, o.k);
  if (o.csv.empty()) {
    residue::write_cycles_csv(out, cs);
  } else {
    std::ofstream file(o.csv);
    if (!file) throw DomainError("cannot open " + o.csv + " for writing");
    residue::write_cycles_csv(file, cs);
  }
  return kAllHold;
}

int cmd_sphere(const Options& o, std::ostream& out) {
  const FunctionSpec f = parse(o.fn);
  const sphere::Sphere sph{parse_integer(o.center, "--center"), o.r, o.p};
  Report rep;
  rep.command = "sphere";
  rep.config = {{"fn", f.to_string()}, {"p", o.p}, {"center", sph.y.get_str()}, {"r", o.r},
                {"analytic", o.analytic}};
  const bool brute = o.sphere_kmax.has_value() || !o.analytic;
  const unsigned kmax = o.sphere_kmax.value_or(o.r + 4);
  if (brute) rep.config["kmax"] = kmax;

  std::optional<SphereVerdict> analytic;
  if (o.analytic) {
    analytic = sphere::sphere_ergodic_analytic(f, sph);
    rep.add(*analytic);
  }
  if (brute) {
    const Verdict bf = sphere::sphere_ergodic_bruteforce(f, sph, kmax);
    rep.add(bf);
    if (analytic && analytic->status != Status::inconclusive &&
        analytic->status != bf.status) {
      rep.mismatch = true;
    }
  }
  return rep.finish(out, o.out);
}

int cmd_gen(const Options& o, std::ostream& out) {
  const FunctionSpec f = parse(o.fn);
  prng::GeneratorConfig config{f, o.width, prng::OutputPolicy::parse(o.policy), o.seed};
  if (o.audit) {
    Report rep;
    rep.command = "gen";
    rep.config = {{"fn", f.to_string()}, {"width", o.width}, {"seed", o.seed},
                  {"policy", config.policy.to_string()}};
    try {
      rep.add(prng::validate_map(f));
    } catch (const GuardError& e) {
      rep.notes.push_back(std::string("refused at validation: ") + e.what());
      rep.all_hold = false;
      return rep.finish(out, o.out);
    }
    rep.add(prng::audit_period(f, o.width, o.seed));
    for (unsigned j = 1; j <= std::min(o.width, 8u); ++j) {
      rep.add(prng::audit_equidistribution(f, o.width, j));
    }
    return rep.finish(out, o.out);
  }
  const std::vector<std::uint8_t> bytes = prng::stream(config, o.count);
  if (o.out.empty()) {
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw DomainError("cannot open " + o.out + " for writing");
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
  }
  return kAllHold;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compatible maps of the p-adic integers: evaluation, ergodicity checks, "
               "sphere dynamics and full-period generators"};
  app.require_subcommand(1);
  Options o;

  auto* eval = app.add_subcommand("eval", "Evaluate a function at a point");
  eval->add_option("--fn", o.fn, "Function in the DSL")->required();
  eval->add_option("--p", o.p, "Prime")->required();
  eval->add_option("--prec", o.prec, "Precision K (base-p digits)")->required();
  eval->add_option("--at", o.at, "Point (repeat for several variables)")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);

  auto* check = app.add_subcommand("check", "Measure preservation / ergodicity / balancedness");
  check->add_option("--fn", o.fn, "Function in the DSL")->required();
  check->add_option("--p", o.p, "Prime")->required();
  check->add_option("--mode", o.mode, "ergodic, mp or balanced")
      ->check(CLI::IsMember({"ergodic", "mp", "balanced"}));
  check->add_option("--kmax", o.kmax, "Highest level checked exhaustively")
      ->check(CLI::Range(1u, 64u));
  check->add_flag("--fast", o.fast, "Also run the coefficient/critical-level criteria");
  check->add_option("--out", o.out, "Write the JSON report here");

  auto* cycles = app.add_subcommand("cycles", "Cycle structure of f mod p^k as CSV");
  cycles->add_option("--fn", o.fn, "Function in the DSL")->required();
  cycles->add_option("--p", o.p, "Prime")->required();
  cycles->add_option("--k", o.k, "Level")->required()->check(CLI::Range(1u, 64u));
  cycles->add_option("--csv", o.csv, "Write the CSV here");

  auto* sph = app.add_subcommand("sphere", "Ergodicity on the sphere S(center, p^-r)");
  sph->add_option("--fn", o.fn, "Function in the DSL")->required();
  sph->add_option("--p", o.p, "Prime")->required();
  sph->add_option("--center", o.center, "Center y")->required();
  sph->add_option("--r", o.r, "Radius exponent")->required()->check(CLI::Range(1u, 64u));
  sph->add_option("--kmax", o.sphere_kmax, "Highest level for the exhaustive check");
  sph->add_flag("--analytic", o.analytic, "Run the derivative criterion");
  sph->add_option("--out", o.out, "Write the JSON report here");

  auto* gen = app.add_subcommand("gen", "Stream words from an ergodic 2-adic map");
  gen->add_option("--fn", o.fn, "Function in the DSL")->required();
  gen->add_option("--width", o.width, "State width K in bits")->check(CLI::Range(1u, 64u));
  gen->add_option("--seed", o.seed, "Initial state");
  gen->add_option("--count", o.count, "Number of output words");
  gen->add_option("--policy", o.policy, "full, high:J or low:J");
  gen->add_flag("--audit", o.audit, "Audit period and equidistribution instead of streaming");
  gen->add_option("--out", o.out, "Write bytes or report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kAllHold;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAllHold;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    apply_state_limit();
    if (eval->parsed()) return cmd_eval(o, out);
    if (check->parsed()) return cmd_check(o, out);
    if (cycles->parsed()) return cmd_cycles(o, out);
    if (sph->parsed()) return cmd_sphere(o, out);
    if (gen->parsed()) return cmd_gen(o, out);
  } catch (const CrossCheckFailure& e) {
    err << "internal mismatch: " << e.what() << '\n';
    return kMismatch;
  } catch (const GuardError& e) {
    err << "refused: " << e.what() << '\n';
    return kSomeFail;
  } catch (const NotInClassA& e) {
    err << "error: " << e.what() << '\n';
    return kSomeFail;
  } catch (const NotCompatible& e) {
    err << "error: " << e.what() << '\n';
    return kSomeFail;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace padic::cli
