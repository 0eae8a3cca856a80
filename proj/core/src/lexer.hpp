#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace secrec::detail {

enum class TokenKind { Identifier, String, Number, Equals, NotEquals, Comma, LBrace, RBrace, LParen, RParen, End };

const char* describe(TokenKind kind) noexcept;

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  ///< decoded contents for strings, raw text otherwise
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
};

struct LexFailure {
  std::size_t line;
  std::size_t column;
  std::size_t length;
  std::string message;
};

/// Tokenizes a whole document. `#` starts a comment running to end of line;
/// newlines are whitespace. Returns false and fills `failure` on bad input.
bool tokenize(std::string_view text, std::vector<Token>& out, LexFailure& failure);

}  // namespace secrec::detail
