#include "tangency/report.hpp"

#include <stdexcept>

namespace tangency {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return 0;
    case Verdict::Fail: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) return Verdict::Inconclusive;
  return Verdict::Pass;
}

void Report::add_check(std::string name, Verdict v, std::string detail) {
  checks.push_back({std::move(name), v, std::move(detail)});
}

void Report::set_value(const std::string& key, double v) {
  for (auto& [k, x] : values)
    if (k == key) {
      x = v;
      return;
    }
  values.emplace_back(key, v);
}

double Report::value(const std::string& key) const {
  for (const auto& [k, x] : values)
    if (k == key) return x;
  throw std::out_of_range("report has no value '" + key + "'");
}

bool Report::has_value(const std::string& key) const {
  for (const auto& [k, x] : values)
    if (k == key) return true;
  return false;
}

void Report::settle() {
  if (checks.empty()) return;
  Verdict v = Verdict::Pass;
  for (const auto& c : checks) v = combine(v, c.verdict);
  verdict = v;
}

}  // namespace tangency
