#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace newsent {

struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const Date&) const = default;

  std::string iso() const;
};

bool is_valid(const Date& d);

// Accepts ISO-8601 ("2021-01-04", optionally followed by a time part) and
// D-MMM-YY / D-MMM-YYYY ("4-Jan-21"). Two-digit years 00-68 map to 20xx,
// 69-99 to 19xx. Anything else, including slash dates whose day/month order
// is ambiguous, yields nullopt.
std::optional<Date> parse_date(std::string_view text);

}  // namespace newsent
