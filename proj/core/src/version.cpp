#include "solbench/version.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "solbench/text.hpp"

namespace solbench {
namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::optional<Version> Version::parse(std::string_view text) {
  std::string t = text::trim(text);
  std::string_view s = t;
  if (!s.empty() && (s[0] == 'v' || s[0] == 'V')) s.remove_prefix(1);
  if (auto plus = s.find_first_of("+-"); plus != std::string_view::npos) s = s.substr(0, plus);
  Version v;
  int* slots[3] = {&v.major, &v.minor, &v.patch};
  std::size_t part = 0;
  while (!s.empty()) {
    if (part == 3) return std::nullopt;
    const auto dot = s.find('.');
    const auto piece = s.substr(0, dot);
    if (piece == "x" || piece == "X" || piece == "*") break;
    if (!parse_int(piece, *slots[part])) return std::nullopt;
    ++part;
    if (dot == std::string_view::npos) break;
    s.remove_prefix(dot + 1);
  }
  if (part == 0) return std::nullopt;
  return v;
}

std::string Version::str() const {
  return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

std::optional<VersionConstraint> VersionConstraint::parse(std::string_view text) {
  VersionConstraint c;
  std::string_view rest = text;
  while (true) {
    const auto bar = rest.find("||");
    const auto chunk = rest.substr(0, bar);
    // Re-join operators separated from their version by spaces (">= 0.4.22").
    std::vector<std::string> words;
    for (auto w : split_ws(chunk)) {
      if (!words.empty() && (words.back() == ">=" || words.back() == "<=" || words.back() == ">" ||
                             words.back() == "<" || words.back() == "=" || words.back() == "^" ||
                             words.back() == "~")) {
        words.back() += std::string(w);
      } else {
        words.emplace_back(w);
      }
    }
    std::vector<Comparator> set;
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::string_view w = words[i];
      if (i + 2 < words.size() && words[i + 1] == "-") {
        auto lo = Version::parse(w);
        auto hi = Version::parse(words[i + 2]);
        if (!lo || !hi) return std::nullopt;
        set.push_back({Op::Ge, *lo});
        set.push_back({Op::Le, *hi});
        i += 2;
        continue;
      }
      Op op = Op::Eq;
      char tilde_or_caret = 0;
      if (w.starts_with(">=")) { op = Op::Ge; w.remove_prefix(2); }
      else if (w.starts_with("<=")) { op = Op::Le; w.remove_prefix(2); }
      else if (w.starts_with(">")) { op = Op::Gt; w.remove_prefix(1); }
      else if (w.starts_with("<")) { op = Op::Lt; w.remove_prefix(1); }
      else if (w.starts_with("=")) { w.remove_prefix(1); }
      else if (w.starts_with("^") || w.starts_with("~")) { tilde_or_caret = w[0]; w.remove_prefix(1); }
      const auto v = Version::parse(w);
      if (!v) return std::nullopt;
      const auto dots = std::count(w.begin(), w.end(), '.');
      if (tilde_or_caret == '^') {
        Version upper;
        if (v->major > 0) upper = {v->major + 1, 0, 0};
        else if (v->minor > 0 || dots < 2) upper = {0, v->minor + 1, 0};
        else upper = {0, 0, v->patch + 1};
        set.push_back({Op::Ge, *v});
        set.push_back({Op::Lt, upper});
      } else if (tilde_or_caret == '~') {
        Version upper = dots >= 1 ? Version{v->major, v->minor + 1, 0} : Version{v->major + 1, 0, 0};
        set.push_back({Op::Ge, *v});
        set.push_back({Op::Lt, upper});
      } else if (op == Op::Eq && dots < 2) {
        // Partial version "0.8" means any 0.8.x.
        set.push_back({Op::Ge, *v});
        set.push_back({Op::Lt, dots == 1 ? Version{v->major, v->minor + 1, 0} : Version{v->major + 1, 0, 0}});
      } else {
        set.push_back({op, *v});
      }
    }
    if (set.empty()) return std::nullopt;
    c.alternatives_.push_back(std::move(set));
    if (bar == std::string_view::npos) break;
    rest.remove_prefix(bar + 2);
  }
  return c;
}

bool VersionConstraint::satisfied_by(const Version& v) const {
  for (const auto& set : alternatives_) {
    bool ok = true;
    for (const auto& [op, bound] : set) {
      switch (op) {
        case Op::Eq: ok = v == bound; break;
        case Op::Lt: ok = v < bound; break;
        case Op::Le: ok = v <= bound; break;
        case Op::Gt: ok = v > bound; break;
        case Op::Ge: ok = v >= bound; break;
      }
      if (!ok) break;
    }
    if (ok) return true;
  }
  return false;
}

bool pragmas_admit(const std::vector<std::string>& pragmas, const Version& v) {
  for (const auto& p : pragmas) {
    if (auto c = VersionConstraint::parse(p); c && !c->satisfied_by(v)) return false;
  }
  return true;
}

bool pragmas_predate_checked_arithmetic(const std::vector<std::string>& pragmas) {
  if (pragmas.empty()) return false;
  for (int minor = 8; minor <= 9; ++minor) {
    for (int patch = 0; patch <= 40; ++patch) {
      if (pragmas_admit(pragmas, Version{0, minor, patch})) return false;
    }
  }
  return true;
}

}  // namespace solbench
