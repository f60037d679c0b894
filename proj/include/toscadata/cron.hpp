#pragma once

#include <bitset>
#include <cstdint>
#include <optional>
#include <string>

namespace toscadata {

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Six-field cron expression restricted to second, minute and hour
/// matching; the calendar fields accept only `*` or `?`.
struct CronExpr {
  std::bitset<60> seconds;
  std::bitset<60> minutes;
  std::bitset<24> hours;
  std::string text;

  bool matches(std::int64_t tick) const;
  bool operator==(const CronExpr& o) const {
    return seconds == o.seconds && minutes == o.minutes && hours == o.hours;
  }
};

/// Throws Error(CronSyntax) on anything outside the grammar.
CronExpr parse_cron(const std::string& text);
bool is_valid_cron(const std::string& text);

/// Smallest t' >= t whose time of day matches.
std::int64_t cron_next(const CronExpr& e, std::int64_t t);

}  // namespace toscadata
