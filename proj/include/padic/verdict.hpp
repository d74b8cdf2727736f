#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace padic {

enum class Status { holds, fails, inconclusive };

std::string to_string(Status s);

struct Verdict;
Verdict make_verdict(std::string check, std::uint64_t p, std::vector<unsigned> levels);

/// Outcome of one check. `fails` always carries a witness. For all-levels
/// statements `holds` means "holds at every level in `levels`".
struct Verdict {
  std::string check;
  std::uint64_t p = 0;
  std::vector<unsigned> levels;
  Status status = Status::inconclusive;
  nlohmann::json witness;  // null when absent
  double elapsed_ms = 0.0;

  bool holds() const noexcept { return status == Status::holds; }
  bool fails() const noexcept { return status == Status::fails; }
};

/// Criterion trace attached to sphere verdicts.
struct SphereTrace {
  unsigned f_at_y_level = 0;
  std::string f_at_y_residue;  // decimal, may exceed 64 bits
  std::uint64_t fprime_mod_p2 = 0;
  std::uint64_t order = 0;  // 0 when f'(y) is not a unit
  bool primitive = false;
  unsigned r_min = 0;
};

struct SphereVerdict : Verdict {
  std::optional<SphereTrace> trace;
};

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const SphereVerdict& v);

/// Measures wall time from construction; stamp() writes elapsed_ms.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  template <class V>
  V& stamp(V& v) const {
    v.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    return v;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace padic
