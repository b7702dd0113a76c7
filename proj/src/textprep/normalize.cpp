#include <array>
#include <cctype>
#include <fstream>

#include "newsent/csv.hpp"
#include "newsent/error.hpp"
#include "newsent/textprep.hpp"
#include "utf8.hpp"

namespace newsent::textprep {

namespace {

using detail::append_utf8;
using detail::is_ascii_space;
using detail::next_code_point;

char32_t to_lower_cp(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) {
    if (cp == 0x130) return U'i';
    if (cp == 0x131) return cp;
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return (cp % 2 == 0) ? cp + 1 : cp;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  if (cp == 0x386) return 0x3AC;
  if (cp >= 0x388 && cp <= 0x38A) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (cp == 0x38E || cp == 0x38F) return cp + 0x3F;
  if ((cp >= 0x391 && cp <= 0x3A1) || (cp >= 0x3A3 && cp <= 0x3AB)) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x460 && cp <= 0x481) return (cp % 2 == 0) ? cp + 1 : cp;
  return cp;
}

// ASCII transliteration of Latin-1 Supplement and Latin Extended-A letters.
// Empty result means the code point is dropped.
std::string_view fold_to_ascii(char32_t cp) {
  static constexpr std::array<std::string_view, 64> kLatin1 = {
      "A", "A", "A", "A", "A", "A", "AE", "C", "E", "E", "E", "E", "I", "I", "I", "I",
      "D", "N", "O", "O", "O", "O", "O",  "",  "O", "U", "U", "U", "U", "Y", "TH", "ss",
      "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
      "d", "n", "o", "o", "o", "o", "o",  "",  "o", "u", "u", "u", "u", "y", "th", "y"};
  static constexpr std::array<std::string_view, 128> kExtendedA = {
      "A", "a", "A", "a", "A", "a", "C", "c", "C", "c", "C", "c", "C", "c", "D", "d",
      "D", "d", "E", "e", "E", "e", "E", "e", "E", "e", "E", "e", "G", "g", "G", "g",
      "G", "g", "G", "g", "H", "h", "H", "h", "I", "i", "I", "i", "I", "i", "I", "i",
      "I", "i", "IJ", "ij", "J", "j", "K", "k", "k", "L", "l", "L", "l", "L", "l", "L",
      "l", "L", "l", "N", "n", "N", "n", "N", "n", "n", "N", "n", "O", "o", "O", "o",
      "O", "o", "OE", "oe", "R", "r", "R", "r", "R", "r", "S", "s", "S", "s", "S", "s",
      "S", "s", "T", "t", "T", "t", "T", "t", "U", "u", "U", "u", "U", "u", "U", "u",
      "U", "u", "U", "u", "W", "w", "Y", "y", "Y", "Z", "z", "Z", "z", "Z", "z", "s"};
  if (cp >= 0xC0 && cp <= 0xFF) return kLatin1[cp - 0xC0];
  if (cp >= 0x100 && cp <= 0x17F) return kExtendedA[cp - 0x100];
  return {};
}

bool is_unicode_space(char32_t cp) {
  return cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 ||
         cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_ascii_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string lowercase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t cp = next_code_point(text, i);
    if (cp == detail::kInvalid) {
      out.append(text.substr(start, i - start));
    } else {
      append_utf8(out, to_lower_cp(cp));
    }
  }
  return out;
}

std::string strip_special(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  auto emit = [&](std::string_view chars) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.append(chars);
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = next_code_point(text, i);
    if (cp < 0x80) {
      const char c = static_cast<char>(cp);
      if (std::isalnum(static_cast<unsigned char>(c))) {
        emit(std::string_view(&c, 1));
      } else if (is_ascii_space(c)) {
        pending_space = true;
      }
    } else if (is_unicode_space(cp)) {
      pending_space = true;
    } else if (auto folded = fold_to_ascii(cp); !folded.empty()) {
      emit(folded);
    }
  }
  return out;
}

std::string normalize_slang(std::string_view text, const SlangTable& table) {
  std::string out;
  for (const auto& word : split_whitespace(text)) {
    if (!out.empty()) out.push_back(' ');
    auto it = table.find(word);
    out += it == table.end() ? word : it->second;
  }
  return out;
}

TokenSequence tokenize(std::string_view text) { return TokenSequence{split_whitespace(text), kNoOrigin}; }

TokenSequence remove_stopwords(const TokenSequence& seq, const StopwordSet& stopwords) {
  TokenSequence out;
  out.origin = seq.origin;
  for (const auto& t : seq.tokens) {
    if (!stopwords.contains(t)) out.tokens.push_back(t);
  }
  return out;
}

std::string join(const TokenSequence& seq) {
  std::string out;
  for (const auto& t : seq.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open stopword file", path.string());
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && is_ascii_space(line.back())) line.pop_back();
    std::size_t b = 0;
    while (b < line.size() && is_ascii_space(line[b])) ++b;
    if (b < line.size()) out.insert(line.substr(b));
  }
  return out;
}

std::unordered_map<std::string, std::string> load_two_column_csv(const std::filesystem::path& path,
                                                                 bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open table", path.string());
  auto rows = csv::parse(in);
  std::unordered_map<std::string, std::string> out;
  for (std::size_t i = has_header ? 1 : 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 2) {
      throw Error(ErrorKind::Parse, "expected two columns", path.string() + ":" + std::to_string(i + 1));
    }
    out.emplace(row[0], row[1]);
  }
  return out;
}

}  // namespace newsent::textprep
