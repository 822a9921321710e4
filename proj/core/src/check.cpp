#include "geim/check.hpp"

#include <cmath>

namespace geim {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

bool audit_holds(double lhs, double rhs) {
  if (std::isnan(lhs) || std::isnan(rhs)) return false;
  return lhs <= rhs * (1.0 + kAuditRelSlack) + kAuditAbsSlack;
}

CheckRecord make_check(std::string id, std::string index, double lhs, double rhs,
                       std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.index = std::move(index);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.status = audit_holds(lhs, rhs) ? CheckStatus::Pass : CheckStatus::Fail;
  r.note = std::move(note);
  return r;
}

CheckRecord skipped_check(std::string id, std::string index, std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.index = std::move(index);
  r.lhs = r.rhs = r.margin = std::nan("");
  r.status = CheckStatus::Skipped;
  r.note = std::move(note);
  return r;
}

CheckCounts count(const std::vector<CheckRecord>& checks) {
  CheckCounts c;
  for (const auto& r : checks) {
    if (r.status == CheckStatus::Pass) ++c.pass;
    else if (r.status == CheckStatus::Fail) ++c.fail;
    else ++c.skipped;
  }
  return c;
}

}  // namespace geim
