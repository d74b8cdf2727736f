#include "padic/verdict.hpp"

#include <gmpxx.h>

namespace padic {

std::string to_string(Status s) {
  switch (s) {
    case Status::holds: return "holds";
    case Status::fails: return "fails";
    case Status::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict make_verdict(std::string check, std::uint64_t p, std::vector<unsigned> levels) {
  Verdict v;
  v.check = std::move(check);
  v.p = p;
  v.levels = std::move(levels);
  return v;
}

nlohmann::json to_json(const Verdict& v) {
  return {{"check", v.check},
          {"p", v.p},
          {"levels", v.levels},
          {"status", to_string(v.status)},
          {"witness", v.witness},
          {"elapsed_ms", v.elapsed_ms}};
}

nlohmann::json to_json(const SphereVerdict& v) {
  nlohmann::json j = to_json(static_cast<const Verdict&>(v));
  if (v.trace) {
    const SphereTrace& t = *v.trace;
    j["thresholds"] = {{"r_min", t.r_min}};
    // Below the threshold nothing past r_min was computed.
    if (t.f_at_y_residue.empty()) return j;
    const mpz_class residue(t.f_at_y_residue);
    if (residue.fits_ulong_p()) {
      j["f_at_y_mod"] = {t.f_at_y_level, residue.get_ui()};
    } else {
      j["f_at_y_mod"] = {t.f_at_y_level, t.f_at_y_residue};
    }
    j["fprime_mod_p2"] = t.fprime_mod_p2;
    j["order"] = t.order;
    j["primitive"] = t.primitive;
  }
  return j;
}

}  // namespace padic
