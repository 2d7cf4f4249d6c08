#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "satgraph/error.hpp"

namespace satgraph {

// Calendar date at day granularity. Timestamps with a time-of-day are
// normalised to UTC and truncated when parsed.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int y, unsigned m, unsigned d)
      : days_(std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} /
                                    std::chrono::day{d}}) {}

  std::chrono::sys_days days() const { return days_; }
  long long serial() const { return days_.time_since_epoch().count(); }
  static Date from_serial(long long n) {
    return Date(std::chrono::sys_days{std::chrono::days{n}});
  }

  std::string iso() const {
    const std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

  friend auto operator<=>(const Date&, const Date&) = default;
  friend bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

namespace detail {

inline bool read_digits(std::string_view s, size_t pos, size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

// Accepts YYYY-MM-DD, optionally followed by Thh:mm[:ss[.fff]] and a zone
// designator (Z or +hh:mm / -hh:mm). Returns nullopt on malformed input.
inline std::optional<Date> try_parse_date(std::string_view s) {
  int y = 0, mo = 0, d = 0;
  if (!detail::read_digits(s, 0, 4, y) || s.size() < 10 || s[4] != '-' ||
      !detail::read_digits(s, 5, 2, mo) || s[7] != '-' || !detail::read_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  Date date{std::chrono::sys_days{ymd}};
  if (s.size() == 10) return date;
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;

  int hh = 0, mm = 0, ss = 0;
  size_t pos = 11;
  if (!detail::read_digits(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
      !detail::read_digits(s, pos + 3, 2, mm)) {
    return std::nullopt;
  }
  pos += 5;
  if (pos < s.size() && s[pos] == ':') {
    if (!detail::read_digits(s, pos + 1, 2, ss)) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      const size_t frac = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == frac) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  int offset_minutes = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
      // UTC
    } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
      int oh = 0, om = 0;
      if (!detail::read_digits(s, pos + 1, 2, oh) || !detail::read_digits(s, pos + 4, 2, om)) {
        return std::nullopt;
      }
      offset_minutes = (oh * 60 + om) * (s[pos] == '+' ? 1 : -1);
    } else {
      return std::nullopt;
    }
  }
  const int utc_minutes = hh * 60 + mm - offset_minutes;
  if (utc_minutes < 0) return Date::from_serial(date.serial() - 1);
  if (utc_minutes >= 24 * 60) return Date::from_serial(date.serial() + 1);
  return date;
}

inline Date parse_date(std::string_view s) {
  auto d = try_parse_date(s);
  if (!d) fail(ErrorCode::kInvalidArgument, "malformed ISO 8601 date: '" + std::string(s) + "'");
  return *d;
}

// Current UTC instant as an ISO 8601 string with second precision.
inline std::string utc_now_iso() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const auto day = std::chrono::floor<std::chrono::days>(now);
  const std::chrono::hh_mm_ss tod{now - day};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%sT%02d:%02d:%02dZ", Date(day).iso().c_str(),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

// Half-open validity interval [start, end); an absent end is open-ended.
struct TimeInterval {
  Date start;
  std::optional<Date> end;

  bool contains(Date t) const { return start <= t && (!end || t < *end); }
  // Closed query window [from, to] intersects this interval.
  bool overlaps_closed(Date from, Date to) const { return start <= to && (!end || *end > from); }
  bool overlaps(const TimeInterval& o) const {
    return (!o.end || start < *o.end) && (!end || o.start < *end);
  }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

}  // namespace satgraph
