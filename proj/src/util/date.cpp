#include "newsent/date.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace newsent {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::optional<unsigned> month_from_abbrev(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kNames = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  if (s.size() != 3) return std::nullopt;
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (unsigned i = 0; i < kNames.size(); ++i) {
    if (lower == kNames[i]) return i + 1;
  }
  return std::nullopt;
}

std::optional<Date> checked(int y, unsigned m, unsigned d) {
  Date out{y, m, d};
  if (!is_valid(out)) return std::nullopt;
  return out;
}

}  // namespace

bool is_valid(const Date& d) {
  return d.year >= 1 && d.year <= 9999 && d.month >= 1 && d.month <= 12 && d.day >= 1 &&
         d.day <= days_in_month(d.year, d.month);
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;

  // ISO: YYYY-MM-DD with optional 'T' or ' ' time suffix.
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-' && all_digits(text.substr(0, 4)) &&
      all_digits(text.substr(5, 2)) && all_digits(text.substr(8, 2))) {
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
    return checked(to_int(text.substr(0, 4)), static_cast<unsigned>(to_int(text.substr(5, 2))),
                   static_cast<unsigned>(to_int(text.substr(8, 2))));
  }

  // D-MMM-YY
  auto first = text.find('-');
  auto second = first == std::string_view::npos ? first : text.find('-', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  auto day = text.substr(0, first);
  auto mon = text.substr(first + 1, second - first - 1);
  auto year = text.substr(second + 1);
  if (!all_digits(day) || day.size() > 2 || !all_digits(year)) return std::nullopt;
  auto m = month_from_abbrev(mon);
  if (!m) return std::nullopt;
  int y = to_int(year);
  if (year.size() == 2) {
    y += y <= 68 ? 2000 : 1900;
  } else if (year.size() != 4) {
    return std::nullopt;
  }
  return checked(y, *m, static_cast<unsigned>(to_int(day)));
}

}  // namespace newsent
