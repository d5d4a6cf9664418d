#include "lexer.hpp"

#include <array>
#include <cctype>

namespace solbench::detail {
namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$'; }

constexpr std::array<std::string_view, 4> kPunct4 = {">>>=", "<<=", ">>=", ">>>"};
constexpr std::array<std::string_view, 24> kPunct2 = {
    "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=",
    "/=", "%=", "|=", "&=", "^=", "<<", ">>", "**", "->", ":=", "::", "..",
};

void match_brackets(Lexed& out) {
  const auto n = out.tokens.size();
  out.partner.resize(n);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    out.partner[i] = i;
    const auto& tok = out.tokens[i];
    if (tok.kind != TokKind::Punct || tok.text.size() != 1) continue;
    const char c = tok.text[0];
    if (c == '(' || c == '[' || c == '{') {
      out.partner[i] = n;
      stack.push_back(i);
    } else if (c == ')' || c == ']' || c == '}') {
      const char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      // Pop unmatched openers of other kinds until the right one shows up.
      std::size_t depth = stack.size();
      while (depth > 0 && out.tokens[stack[depth - 1]].text[0] != open) --depth;
      if (depth == 0) {
        out.partner[i] = n;
        continue;
      }
      const auto o = stack[depth - 1];
      stack.resize(depth - 1);
      out.partner[o] = i;
      out.partner[i] = o;
    }
  }
}

}  // namespace

Lexed lex(std::string_view src) {
  Lexed out;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = src.size();
  auto count_lines = [&](std::size_t from, std::size_t to) {
    for (std::size_t k = from; k < to; ++k)
      if (src[k] == '\n') ++line;
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      auto end = src.find('\n', i);
      if (end == std::string_view::npos) end = n;
      out.comments.push_back({src.substr(i, end - i), line});
      i = end;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      auto end = src.find("*/", i + 2);
      end = end == std::string_view::npos ? n : end + 2;
      out.comments.push_back({src.substr(i, end - i), line});
      count_lines(i, end);
      i = end;
      continue;
    }
    const std::size_t start = i;
    const int start_line = line;
    if (ident_start(c)) {
      while (i < n && ident_char(static_cast<unsigned char>(src[i]))) ++i;
      const auto word = src.substr(start, i - start);
      // hex"..." and unicode"..." literals lex as one string token.
      if ((word == "hex" || word == "unicode") && i < n && (src[i] == '"' || src[i] == '\'')) {
        const char q = src[i++];
        while (i < n && src[i] != q && src[i] != '\n') i += (src[i] == '\\' && i + 1 < n) ? 2 : 1;
        if (i < n && src[i] == q) ++i;
        out.tokens.push_back({TokKind::String, src.substr(start, i - start), start_line, start});
        continue;
      }
      out.tokens.push_back({TokKind::Ident, word, start_line, start});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < n) {
        const auto d = static_cast<unsigned char>(src[i]);
        if (std::isalnum(d) || d == '_') {
          ++i;
        } else if (d == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1]))) {
          ++i;
        } else {
          break;
        }
      }
      out.tokens.push_back({TokKind::Number, src.substr(start, i - start), start_line, start});
      continue;
    }
    if (c == '"' || c == '\'') {
      ++i;
      while (i < n && src[i] != static_cast<char>(c) && src[i] != '\n') {
        i += (src[i] == '\\' && i + 1 < n && src[i + 1] != '\n') ? 2 : 1;
      }
      if (i < n && src[i] == static_cast<char>(c)) ++i;
      out.tokens.push_back({TokKind::String, src.substr(start, i - start), start_line, start});
      continue;
    }
    if (c >= 0x80 || std::iscntrl(c)) {
      ++i;
      out.tokens.push_back({TokKind::Other, src.substr(start, 1), start_line, start});
      continue;
    }
    std::size_t len = 1;
    for (auto p : kPunct4) {
      if (src.substr(i, p.size()) == p) {
        len = p.size();
        break;
      }
    }
    if (len == 1) {
      for (auto p : kPunct2) {
        if (src.substr(i, 2) == p) {
          len = 2;
          break;
        }
      }
    }
    i += len;
    out.tokens.push_back({TokKind::Punct, src.substr(start, len), start_line, start});
  }
  match_brackets(out);
  return out;
}

}  // namespace solbench::detail
