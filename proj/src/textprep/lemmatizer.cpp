#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "newsent/textprep.hpp"

namespace newsent::textprep {

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool ends_with(std::string_view w, std::string_view s) {
  return w.size() >= s.size() && w.substr(w.size() - s.size()) == s;
}

bool has_vowel(std::string_view w) {
  return std::any_of(w.begin(), w.end(), [](char c) { return is_vowel(c) || c == 'y'; });
}

// Number of vowel->consonant transitions, as in the Porter measure.
int measure(std::string_view w) {
  int m = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (is_vowel(w[i - 1]) && !is_vowel(w[i])) ++m;
  }
  return m;
}

bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  const char a = w[w.size() - 3], b = w[w.size() - 2], c = w[w.size() - 1];
  return !is_vowel(a) && is_vowel(b) && !is_vowel(c) && c != 'w' && c != 'x' && c != 'y';
}

// Restores the form left after cutting -ed / -ing: undouble a final
// consonant pair, or put back a silent e.
std::string restore_verb_stem(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
    return stem;
  }
  static constexpr std::array<std::string_view, 7> kTakesE = {"at", "bl", "iz", "v", "c", "rg", "dg"};
  for (auto s : kTakesE) {
    if (ends_with(stem, s)) {
      // "-at" only when the stem is otherwise short ("rated", "created").
      if (s == "at" && measure(stem) > 2) break;
      return stem + "e";
    }
  }
  if (n >= 3 && stem[n - 1] == 's' && is_vowel(stem[n - 2]) && is_vowel(stem[n - 3])) return stem + "e";
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

std::string strip_verb(std::string_view w);

std::string strip_plural(std::string_view w) {
  std::string s(w);
  if (s.size() <= 3) return s;
  if (ends_with(s, "ss") || ends_with(s, "us") || ends_with(s, "is")) return s;
  if (ends_with(s, "ies") && s.size() > 4) return s.substr(0, s.size() - 3) + "y";
  for (std::string_view es : {"sses", "ches", "shes", "xes", "zes"}) {
    if (ends_with(s, es)) return s.substr(0, s.size() - 2);
  }
  if (s.back() != 's') return s;
  // Plurals of verbal nouns ("earnings", "holdings") are their own lemma.
  const std::string singular = s.substr(0, s.size() - 1);
  if ((ends_with(singular, "ing") || ends_with(singular, "ed")) && strip_verb(singular) != singular) return s;
  return singular;
}

std::string strip_verb(std::string_view w) {
  std::string s(w);
  if (ends_with(s, "ing")) {
    std::string stem = s.substr(0, s.size() - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_verb_stem(stem);
    return s;
  }
  if (ends_with(s, "ed")) {
    if (ends_with(s, "eed")) return s;
    if (ends_with(s, "ied") && s.size() > 4) return s.substr(0, s.size() - 3) + "y";
    std::string stem = s.substr(0, s.size() - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return restore_verb_stem(stem);
    return s;
  }
  return strip_plural(s);
}

const std::unordered_map<std::string_view, PosTag>& closed_class() {
  static const auto* table = [] {
    auto* m = new std::unordered_map<std::string_view, PosTag>;
    auto add = [m](std::initializer_list<std::string_view> words, PosTag tag) {
      for (auto w : words) m->emplace(w, tag);
    };
    add({"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no",
         "all", "both", "either", "neither", "my", "your", "his", "her", "its", "our", "their"},
        PosTag::Determiner);
    add({"i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them", "who", "whom",
         "what", "which", "myself", "yourself", "itself", "themselves"},
        PosTag::Pronoun);
    add({"in", "on", "at", "of", "for", "with", "by", "from", "to", "into", "over", "under", "after",
         "before", "amid", "against", "between", "about", "above", "below", "through", "during",
         "without", "within", "across", "near", "per", "via", "despite", "since", "until", "toward",
         "towards", "onto", "upon", "among"},
        PosTag::Preposition);
    add({"and", "or", "but", "nor", "yet", "because", "although", "though", "while", "if", "unless",
         "whereas", "than"},
        PosTag::Conjunction);
    add({"will", "would", "can", "could", "shall", "should", "may", "might", "must"}, PosTag::Modal);
    add({"is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "do", "does",
         "did", "give", "make", "take", "get", "say", "see", "go", "come", "know", "keep", "let"},
        PosTag::Verb);
    add({"not", "very", "also", "just", "too", "now", "then", "here", "there", "still", "already",
         "never", "always", "again", "often", "soon", "up", "down"},
        PosTag::Adverb);
    add({"good", "bad", "better", "best", "worse", "worst", "high", "low", "new", "old", "big",
         "small", "strong", "weak", "great", "higher", "lower", "top", "key"},
        PosTag::Adjective);
    return m;
  }();
  return *table;
}

PosTag suffix_tag(std::string_view w) {
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == ',';
      }) && std::isdigit(static_cast<unsigned char>(w.front()))) {
    return PosTag::Number;
  }
  if (w.size() > 4 && ends_with(w, "ly")) return PosTag::Adverb;
  if (w.size() > 4 && (ends_with(w, "ing") || (ends_with(w, "ed") && !ends_with(w, "eed")))) {
    return PosTag::Verb;
  }
  for (std::string_view s : {"tion", "sion", "ment", "ness", "ity", "ance", "ence", "ship", "ism"}) {
    if (w.size() > s.size() + 2 && ends_with(w, s)) return PosTag::Noun;
  }
  for (std::string_view s : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic", "al"}) {
    if (w.size() > s.size() + 2 && ends_with(w, s)) return PosTag::Adjective;
  }
  return PosTag::Noun;
}

bool is_determiner_like(std::string_view w) {
  auto it = closed_class().find(w);
  return it != closed_class().end() && it->second == PosTag::Determiner;
}

}  // namespace

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adjective: return "ADJ";
    case PosTag::Adverb: return "ADV";
    case PosTag::Pronoun: return "PRON";
    case PosTag::Determiner: return "DET";
    case PosTag::Preposition: return "ADP";
    case PosTag::Conjunction: return "CONJ";
    case PosTag::Modal: return "MODAL";
    case PosTag::Number: return "NUM";
  }
  return "X";
}

std::string lemmatize(std::string_view token, PosTag tag, const LemmaExceptions& exceptions) {
  if (auto it = exceptions.find(std::string(token)); it != exceptions.end()) return it->second;
  switch (tag) {
    case PosTag::Verb: return strip_verb(token);
    case PosTag::Noun: return strip_plural(token);
    default: return std::string(token);
  }
}

std::vector<std::pair<std::string, PosTag>> pos_tag(const TokenSequence& seq) {
  std::vector<std::pair<std::string, PosTag>> out;
  out.reserve(seq.tokens.size());
  const auto& lexicon = closed_class();
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const std::string& w = seq.tokens[i];
    auto it = lexicon.find(w);
    PosTag tag = it != lexicon.end() ? it->second : suffix_tag(w);
    const bool open_class = it == lexicon.end();
    if (open_class && i > 0) {
      const std::string& prev = seq.tokens[i - 1];
      auto p = lexicon.find(prev);
      if (prev == "to" || (p != lexicon.end() && p->second == PosTag::Modal)) tag = PosTag::Verb;
    }
    if (open_class && i == 0 && seq.tokens.size() > 1 && is_determiner_like(seq.tokens[1])) {
      tag = PosTag::Verb;
    }
    out.emplace_back(w, tag);
  }
  return out;
}

}  // namespace newsent::textprep
