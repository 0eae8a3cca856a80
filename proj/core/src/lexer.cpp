#include "lexer.hpp"

#include <cctype>

namespace secrec::detail {

const char* describe(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Number: return "number";
    case TokenKind::Equals: return "'='";
    case TokenKind::NotEquals: return "'!='";
    case TokenKind::Comma: return "','";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  bool run(std::vector<Token>& out, LexFailure& failure) {
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) break;
      Token tok;
      tok.line = line_;
      tok.column = col_;
      std::size_t start = pos_;
      char c = text_[pos_];
      if (ident_start(c)) {
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        tok.kind = TokenKind::Identifier;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (digit(c) || ((c == '+' || c == '-' || c == '.') && pos_ + 1 < text_.size() &&
                              (digit(text_[pos_ + 1]) || text_[pos_ + 1] == '.'))) {
        if (!lex_number(failure)) return false;
        tok.kind = TokenKind::Number;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (c == '"') {
        if (!lex_string(tok.text, failure)) return false;
        tok.kind = TokenKind::String;
      } else if (c == '!' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
        advance();
        advance();
        tok.kind = TokenKind::NotEquals;
        tok.text = "!=";
      } else {
        switch (c) {
          case '=': tok.kind = TokenKind::Equals; break;
          case ',': tok.kind = TokenKind::Comma; break;
          case '{': tok.kind = TokenKind::LBrace; break;
          case '}': tok.kind = TokenKind::RBrace; break;
          case '(': tok.kind = TokenKind::LParen; break;
          case ')': tok.kind = TokenKind::RParen; break;
          default:
            failure = {line_, col_, 1, std::string("unexpected character '") + printable(c) + "'"};
            return false;
        }
        tok.text = std::string(1, c);
        advance();
      }
      tok.length = pos_ - start;
      if (tok.line != line_) tok.length = 1;  // multi-line string
      out.push_back(std::move(tok));
    }
    Token end;
    end.kind = TokenKind::End;
    if (out.empty()) {
      end.line = 1;
      end.column = 1;
    } else {
      end.line = out.back().line;
      end.column = out.back().column + out.back().length;
    }
    out.push_back(end);
    return true;
  }

 private:
  static std::string printable(char c) {
    if (std::isprint(static_cast<unsigned char>(c))) return std::string(1, c);
    static const char* hex = "0123456789abcdef";
    unsigned char u = static_cast<unsigned char>(c);
    return std::string("\\x") + hex[u >> 4] + hex[u & 15];
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  bool lex_number(LexFailure& failure) {
    std::size_t line = line_, col = col_;
    if (text_[pos_] == '+' || text_[pos_] == '-') advance();
    bool digits = false;
    while (pos_ < text_.size() && digit(text_[pos_])) {
      advance();
      digits = true;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      while (pos_ < text_.size() && digit(text_[pos_])) {
        advance();
        digits = true;
      }
    }
    if (digits && pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      bool exp_digits = false;
      while (pos_ < text_.size() && digit(text_[pos_])) {
        advance();
        exp_digits = true;
      }
      digits = exp_digits;
    }
    if (!digits || (pos_ < text_.size() && ident_char(text_[pos_]))) {
      failure = {line, col, col_ > col ? col_ - col : 1, "malformed number"};
      return false;
    }
    return true;
  }

  bool lex_string(std::string& out, LexFailure& failure) {
    std::size_t line = line_, col = col_;
    advance();
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '"') {
        advance();
        return true;
      }
      if (c == '\n') break;
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
        char e = text_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            failure = {line_, col_ > 1 ? col_ - 1 : 1, 2, std::string("unknown escape '\\") + printable(e) + "'"};
            return false;
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
    failure = {line, col, 1, "unterminated string"};
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

bool tokenize(std::string_view text, std::vector<Token>& out, LexFailure& failure) {
  return Lexer(text).run(out, failure);
}

}  // namespace secrec::detail
