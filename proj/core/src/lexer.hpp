#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace solbench::detail {

enum class TokKind { Ident, Number, String, Punct, Other };

struct Token {
  TokKind kind = TokKind::Other;
  std::string_view text;
  int line = 1;
  std::size_t offset = 0;
};

struct Comment {
  std::string_view text;
  int line = 1;
};

struct Lexed {
  std::vector<Token> tokens;
  std::vector<Comment> comments;
  /// For every bracket token, the index of its partner; tokens.size() when
  /// unmatched. Non-bracket tokens map to themselves.
  std::vector<std::size_t> partner;
};

/// Tokenizes arbitrary bytes; never fails. Views point into `source`.
Lexed lex(std::string_view source);

}  // namespace solbench::detail
