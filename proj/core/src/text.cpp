#include "solbench/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace solbench::text {
namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }

constexpr std::array<std::string_view, 64> kStopwords = {
    "the",    "and",     "for",      "with",   "from",     "that",    "this",   "shall",
    "must",   "will",    "each",     "any",    "all",      "are",     "has",    "have",
    "into",   "upon",    "when",     "then",   "than",     "which",   "their",  "its",
    "not",    "may",     "can",      "should", "contract", "party",   "parties", "been",
    "being",  "but",     "only",     "such",   "other",    "per",     "was",    "were",
    "who",    "whom",    "whose",    "also",   "after",    "before",  "via",    "within",
    "until",  "they",    "them",     "there",  "these",    "those",   "would",  "could",
    "does",   "did",     "our",      "your",   "his",      "her",     "out",    "about",
};

bool is_stopword(std::string_view w) {
  return std::find(kStopwords.begin(), kStopwords.end(), w) != kStopwords.end();
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(first, last - first + 1));
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(is_alpha(s[0]) || s[0] == '_' || s[0] == '$')) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return is_alpha(c) || is_digit(c) || c == '_' || c == '$'; });
}

std::vector<std::string> split_identifier(std::string_view ident) {
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) parts.push_back(to_lower(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < ident.size(); ++i) {
    const char c = ident[i];
    if (!(is_alpha(c) || is_digit(c))) {
      flush();
      continue;
    }
    if (!cur.empty()) {
      const char prev = cur.back();
      const bool hump = is_upper(c) && is_lower(prev);
      // "ERC20Token" -> ERC20 | Token: an upper followed by lower ends an acronym run.
      const bool acronym_end = is_upper(c) && is_upper(prev) && i + 1 < ident.size() &&
                               is_lower(ident[i + 1]);
      const bool letter_after_digit = is_alpha(c) && is_digit(prev) && is_upper(c);
      if (hump || acronym_end || letter_after_digit) flush();
    }
    cur.push_back(c);
  }
  flush();
  return parts;
}

std::string fold_identifier(std::string_view ident) {
  std::string out;
  out.reserve(ident.size());
  for (char c : ident) {
    if (c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string stem(std::string_view word) {
  static constexpr std::array<std::string_view, 5> kSuffixes = {"ing", "ed", "es", "s", "e"};
  std::string w = to_lower(word);
  for (auto suffix : kSuffixes) {
    if (w.size() >= suffix.size() + 3 && w.ends_with(suffix)) {
      w.resize(w.size() - suffix.size());
      break;
    }
  }
  return w;
}

std::set<std::string> significant_tokens(std::string_view text) {
  std::set<std::string> out;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    for (auto& part : split_identifier(word)) {
      if (part.size() < 3 || is_stopword(part)) continue;
      if (std::all_of(part.begin(), part.end(), is_digit)) continue;
      out.insert(stem(part));
    }
    word.clear();
  };
  for (char c : text) {
    if (is_alpha(c) || is_digit(c) || c == '_') {
      word.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

bool shares_token(const std::set<std::string>& a, const std::set<std::string>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  return std::any_of(small.begin(), small.end(), [&](const std::string& t) { return large.count(t) > 0; });
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace solbench::text
