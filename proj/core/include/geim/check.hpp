#pragma once

#include <string>
#include <vector>

namespace geim {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus status);

/// One audited inequality lhs <= rhs.
struct CheckRecord {
  std::string id;
  std::string index;  ///< "n=3" or "N=0,K=4,m=2"
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  CheckStatus status = CheckStatus::Skipped;
  std::string note;
};

inline constexpr double kAuditRelSlack = 1e-9;
inline constexpr double kAuditAbsSlack = 1e-12;

/// lhs <= rhs (1 + 1e-9) + 1e-12
bool audit_holds(double lhs, double rhs);

CheckRecord make_check(std::string id, std::string index, double lhs, double rhs,
                       std::string note = {});
CheckRecord skipped_check(std::string id, std::string index, std::string note);

struct CheckCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t skipped = 0;
};

CheckCounts count(const std::vector<CheckRecord>& checks);

}  // namespace geim
