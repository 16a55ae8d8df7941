#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace realiz {

enum class Verdict { Pass, Fail, Unknown, NotApplicable };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
    case Verdict::NotApplicable: return "not-applicable";
  }
  return "?";
}

struct Check {
  std::string module;
  std::string id;
  std::string law;  // short name of the law being tested
  Verdict verdict = Verdict::Pass;
  std::string witness;  // counterexample for Fail, reason for Unknown
  std::string detail;
  double elapsed_ms = 0.0;
};

struct Report {
  std::vector<Check> checks;

  Check& add(std::string module, std::string id, std::string law, Verdict v, std::string witness = {},
             std::string detail = {}) {
    checks.push_back({std::move(module), std::move(id), std::move(law), v, std::move(witness), std::move(detail), 0.0});
    return checks.back();
  }

  Check& pass(std::string module, std::string id, std::string law, std::string detail = {}) {
    return add(std::move(module), std::move(id), std::move(law), Verdict::Pass, {}, std::move(detail));
  }

  Check& fail(std::string module, std::string id, std::string law, std::string witness) {
    return add(std::move(module), std::move(id), std::move(law), Verdict::Fail, std::move(witness));
  }

  Check& unknown(std::string module, std::string id, std::string law, std::string reason) {
    return add(std::move(module), std::move(id), std::move(law), Verdict::Unknown, std::move(reason));
  }

  Check& not_applicable(std::string module, std::string id, std::string law, std::string reason) {
    return add(std::move(module), std::move(id), std::move(law), Verdict::NotApplicable, std::move(reason));
  }

  void merge(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) {
      return c.verdict == Verdict::Pass || c.verdict == Verdict::NotApplicable;
    });
  }

  const Check* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }

  const Check* first_failure() const {
    for (const auto& c : checks)
      if (c.verdict == Verdict::Fail) return &c;
    return nullptr;
  }

  // Fail dominates Unknown, which dominates Pass; not-applicable checks are neutral.
  Verdict overall() const {
    Verdict v = Verdict::Pass;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return Verdict::Fail;
      if (c.verdict == Verdict::Unknown) v = Verdict::Unknown;
    }
    return v;
  }
};

inline Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace realiz
