#include "toscadata/cron.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "toscadata/error.hpp"

namespace toscadata {

namespace {

[[noreturn]] void bad(const std::string& text, const std::string& why) {
  throw Error(ErrorCode::CronSyntax, "invalid cron expression '" + text + "': " + why);
}

std::optional<int> to_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <std::size_t N>
std::bitset<N> parse_field(const std::string& field, const std::string& text,
                           const char* what) {
  std::bitset<N> bits;
  if (field == "*") return bits.set();
  if (field.starts_with("*/")) {
    auto step = to_int(std::string_view(field).substr(2));
    if (!step || *step < 1 || *step > static_cast<int>(N))
      bad(text, std::string("bad step in ") + what + " field");
    for (std::size_t v = 0; v < N; v += static_cast<std::size_t>(*step)) bits.set(v);
    return bits;
  }
  std::string_view rest(field);
  while (true) {
    auto comma = rest.find(',');
    auto v = to_int(rest.substr(0, comma));
    if (!v || *v < 0 || *v >= static_cast<int>(N))
      bad(text, std::string("bad value in ") + what + " field");
    bits.set(static_cast<std::size_t>(*v));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return bits;
}

}  // namespace

bool CronExpr::matches(std::int64_t tick) const {
  std::int64_t day = ((tick % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
  return seconds.test(static_cast<std::size_t>(day % 60)) &&
         minutes.test(static_cast<std::size_t>(day / 60 % 60)) &&
         hours.test(static_cast<std::size_t>(day / 3600));
}

CronExpr parse_cron(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> fields;
  for (std::string f; in >> f;) fields.push_back(f);
  if (fields.size() != 6) bad(text, "expected 6 fields");
  CronExpr e;
  e.text = text;
  e.seconds = parse_field<60>(fields[0], text, "second");
  e.minutes = parse_field<60>(fields[1], text, "minute");
  e.hours = parse_field<24>(fields[2], text, "hour");
  static const char* names[] = {"day-of-month", "month", "day-of-week"};
  for (int i = 3; i < 6; ++i)
    if (fields[i] != "*" && fields[i] != "?")
      bad(text, std::string(names[i - 3]) + " field must be * or ?");
  return e;
}

bool is_valid_cron(const std::string& text) {
  try {
    parse_cron(text);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::int64_t cron_next(const CronExpr& e, std::int64_t t) {
  // Skip whole hours and minutes that cannot match.
  std::int64_t x = t;
  for (std::int64_t limit = t + 2 * kSecondsPerDay; x <= limit;) {
    std::int64_t day = ((x % kSecondsPerDay) + kSecondsPerDay) % kSecondsPerDay;
    std::int64_t h = day / 3600, m = day / 60 % 60, s = day % 60;
    if (!e.hours.test(static_cast<std::size_t>(h))) {
      x += 3600 - m * 60 - s;
    } else if (!e.minutes.test(static_cast<std::size_t>(m))) {
      x += 60 - s;
    } else if (!e.seconds.test(static_cast<std::size_t>(s))) {
      x += 1;
    } else {
      return x;
    }
  }
  return x;
}

}  // namespace toscadata
