// Porter, "An algorithm for suffix stripping" (1980), original rule set.
// Words are processed as lowercase ASCII; other bytes are treated as
// consonants.

#include <array>
#include <string>

#include "newsent/textprep.hpp"

namespace newsent::textprep {

namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// 'y' is a consonant at the start of a word or after a vowel.
std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i])) flags[i] = false;
    else if (w[i] == 'y') flags[i] = i == 0 ? true : !flags[i - 1];
    else flags[i] = true;
  }
  return flags;
}

bool is_consonant(std::string_view w, std::size_t i) { return consonant_flags(w.substr(0, i + 1))[i]; }

// m in [C](VC){m}[V]
int measure(std::string_view stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (!flags[i - 1] && flags[i]) ++m;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (bool c : consonant_flags(stem)) {
    if (!c) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

// *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  auto flags = consonant_flags(w);
  const std::size_t n = w.size();
  return flags[n - 3] && !flags[n - 2] && flags[n - 1] && w[n - 1] != 'w' && w[n - 1] != 'x' &&
         w[n - 1] != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

using Condition = bool (*)(std::string_view);

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;  // nullptr: unconditional
};

bool m_gt_0(std::string_view s) { return measure(s) > 0; }
bool m_gt_1(std::string_view s) { return measure(s) > 1; }
bool m_gt_1_and_s_or_t(std::string_view s) {
  return measure(s) > 1 && !s.empty() && (s.back() == 's' || s.back() == 't');
}

// The first rule whose suffix matches decides: it fires if its condition
// holds, otherwise the word is returned unchanged.
template <std::size_t N>
std::string apply_rules(const std::string& w, const std::array<Rule, N>& rules) {
  for (const auto& r : rules) {
    if (!ends_with(w, r.suffix)) continue;
    std::string stem = w.substr(0, w.size() - r.suffix.size());
    if (r.condition && !r.condition(stem)) return w;
    return stem + std::string(r.replacement);
  }
  return w;
}

std::string step1a(const std::string& w) {
  static constexpr std::array<Rule, 4> kRules = {{
      {"sses", "ss", nullptr},
      {"ies", "i", nullptr},
      {"ss", "ss", nullptr},
      {"s", "", nullptr},
  }};
  return apply_rules(w, kRules);
}

std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      stem = w.substr(0, w.size() - suffix.size());
      if (contains_vowel(stem)) {
        removed = true;
        break;
      }
    }
  }
  if (!removed) return w;
  if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string step1c(const std::string& w) {
  if (ends_with(w, "y")) {
    std::string stem = w.substr(0, w.size() - 1);
    if (contains_vowel(stem)) return stem + "i";
  }
  return w;
}

std::string step2(const std::string& w) {
  static constexpr std::array<Rule, 20> kRules = {{
      {"ational", "ate", m_gt_0}, {"tional", "tion", m_gt_0}, {"enci", "ence", m_gt_0},
      {"anci", "ance", m_gt_0},   {"izer", "ize", m_gt_0},    {"abli", "able", m_gt_0},
      {"alli", "al", m_gt_0},     {"entli", "ent", m_gt_0},   {"eli", "e", m_gt_0},
      {"ousli", "ous", m_gt_0},   {"ization", "ize", m_gt_0}, {"ation", "ate", m_gt_0},
      {"ator", "ate", m_gt_0},    {"alism", "al", m_gt_0},    {"iveness", "ive", m_gt_0},
      {"fulness", "ful", m_gt_0}, {"ousness", "ous", m_gt_0}, {"aliti", "al", m_gt_0},
      {"iviti", "ive", m_gt_0},   {"biliti", "ble", m_gt_0},
  }};
  return apply_rules(w, kRules);
}

std::string step3(const std::string& w) {
  static constexpr std::array<Rule, 7> kRules = {{
      {"icate", "ic", m_gt_0},
      {"ative", "", m_gt_0},
      {"alize", "al", m_gt_0},
      {"iciti", "ic", m_gt_0},
      {"ical", "ic", m_gt_0},
      {"ful", "", m_gt_0},
      {"ness", "", m_gt_0},
  }};
  return apply_rules(w, kRules);
}

std::string step4(const std::string& w) {
  static constexpr std::array<Rule, 19> kRules = {{
      {"al", "", m_gt_1},    {"ance", "", m_gt_1}, {"ence", "", m_gt_1},
      {"er", "", m_gt_1},    {"ic", "", m_gt_1},   {"able", "", m_gt_1},
      {"ible", "", m_gt_1},  {"ant", "", m_gt_1},  {"ement", "", m_gt_1},
      {"ment", "", m_gt_1},  {"ent", "", m_gt_1},  {"ion", "", m_gt_1_and_s_or_t},
      {"ou", "", m_gt_1},    {"ism", "", m_gt_1},  {"ate", "", m_gt_1},
      {"iti", "", m_gt_1},   {"ous", "", m_gt_1},  {"ive", "", m_gt_1},
      {"ize", "", m_gt_1},
  }};
  return apply_rules(w, kRules);
}

std::string step5a(const std::string& w) {
  if (!ends_with(w, "e")) return w;
  std::string stem = w.substr(0, w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) return stem;
  return w;
}

std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace

std::string porter_stem(std::string_view token) {
  std::string w;
  w.reserve(token.size());
  for (char c : token) {
    w.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 0x20) : c);
  }
  if (w.empty()) return w;
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace newsent::textprep
