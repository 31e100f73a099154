#include "opus/stem.hpp"

#include <array>
#include <cctype>

namespace opus {
namespace {

bool is_letter(char c) { return c >= 'a' && c <= 'z'; }

// A letter is a consonant if it is not a,e,i,o,u and not a 'y' preceded by
// a consonant. 'y' at word start counts as a consonant.
bool is_consonant(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0, len): the measure m in [C](VC)^m[V].
std::size_t measure(const std::string& w, std::size_t len) {
  std::size_t m = 0;
  std::size_t i = 0;
  while (i < len && is_consonant(w, i)) ++i;
  while (i < len) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i == len) break;
    ++m;
    while (i < len && is_consonant(w, i)) ++i;
  }
  return m;
}

bool contains_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(const std::string& w, std::size_t len) {
  if (len < 2) return false;
  return w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// *o: stem ends consonant-vowel-consonant, final consonant not w, x or y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) {
    return false;
  }
  char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool has_suffix(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  std::size_t min_measure;  // condition m > min_measure on the stem
};

void step_1a(std::string& w) {
  if (has_suffix(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (has_suffix(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (has_suffix(w, "ss")) {
    // keep
  } else if (has_suffix(w, "s")) {
    w.pop_back();
  }
}

void step_1b(std::string& w) {
  if (has_suffix(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  bool stripped = false;
  if (has_suffix(w, "ed") && contains_vowel(w, w.size() - 2)) {
    w.erase(w.size() - 2);
    stripped = true;
  } else if (has_suffix(w, "ing") && contains_vowel(w, w.size() - 3)) {
    w.erase(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;

  if (has_suffix(w, "at") || has_suffix(w, "bl") || has_suffix(w, "iz")) {
    w.push_back('e');
  } else if (ends_double_consonant(w, w.size())) {
    char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step_1c(std::string& w) {
  if (has_suffix(w, "y") && contains_vowel(w, w.size() - 1)) {
    w.back() = 'i';
  }
}

constexpr std::array<Rule, 20> kStep2Rules = {{
    {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
    {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
    {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
    {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
    {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
    {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
    {"iviti", "ive", 0},   {"biliti", "ble", 0},
}};

constexpr std::array<Rule, 7> kStep3Rules = {{
    {"icate", "ic", 0}, {"ative", "", 0}, {"alize", "al", 0}, {"iciti", "ic", 0},
    {"ical", "ic", 0},  {"ful", "", 0},   {"ness", "", 0},
}};

constexpr std::array<Rule, 18> kStep4Rules = {{
    {"al", "", 1},    {"ance", "", 1}, {"ence", "", 1}, {"er", "", 1},
    {"ic", "", 1},    {"able", "", 1}, {"ible", "", 1}, {"ant", "", 1},
    {"ement", "", 1}, {"ment", "", 1}, {"ent", "", 1},  {"ou", "", 1},
    {"ism", "", 1},   {"ate", "", 1},  {"iti", "", 1},  {"ous", "", 1},
    {"ive", "", 1},   {"ize", "", 1},
}};

template <std::size_t N>
void longest_first(const std::array<Rule, N>& rules, std::string& w) {
  // Rules must fire on the longest matching suffix; the tables are not
  // ordered by length, so scan for the longest match.
  const Rule* best = nullptr;
  for (const Rule& r : rules) {
    if (has_suffix(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size())) {
      best = &r;
    }
  }
  if (!best) return;
  std::size_t stem_len = w.size() - best->suffix.size();
  if (measure(w, stem_len) > best->min_measure) {
    w.replace(stem_len, best->suffix.size(), best->replacement);
  }
}

void step_4(std::string& w) {
  // ION carries an extra *S-or-*T condition. No other step-4 suffix can
  // co-occur with it, so it gets a dedicated branch.
  if (has_suffix(w, "ion")) {
    std::size_t stem_len = w.size() - 3;
    if (measure(w, stem_len) > 1 && stem_len > 0 &&
        (w[stem_len - 1] == 's' || w[stem_len - 1] == 't')) {
      w.erase(stem_len);
    }
    return;
  }
  longest_first(kStep4Rules, w);
}

void step_5a(std::string& w) {
  if (!has_suffix(w, "e")) return;
  std::size_t stem_len = w.size() - 1;
  std::size_t m = measure(w, stem_len);
  if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) w.pop_back();
}

void step_5b(std::string& w) {
  if (measure(w, w.size()) > 1 && ends_double_consonant(w, w.size()) && w.back() == 'l') {
    w.pop_back();
  }
}

}  // namespace

std::string stem(std::string_view token) {
  std::string w(token);
  for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (w.size() <= 2) return w;
  for (char c : w) {
    if (!is_letter(c)) return w;
  }

  step_1a(w);
  step_1b(w);
  step_1c(w);
  longest_first(kStep2Rules, w);
  longest_first(kStep3Rules, w);
  step_4(w);
  step_5a(w);
  step_5b(w);
  return w;
}

}  // namespace opus
