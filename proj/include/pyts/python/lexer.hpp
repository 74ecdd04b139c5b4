#ifndef PYTS_PYTHON_LEXER_HPP
#define PYTS_PYTHON_LEXER_HPP

#include <cctype>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "pyts/error.hpp"

namespace pyts::py {

enum class Tok { name, number, string, op, newline, indent, dedent, end };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

/// Splits Python source into tokens with INDENT/DEDENT markers. Newlines
/// inside brackets and after a backslash are joined; comments and blank
/// lines are dropped.
class Lexer {
 public:
  Lexer(std::string_view src, std::string file) : src_(src), file_(std::move(file)) {}

  std::vector<Token> run() {
    indents_.assign(1, 0);
    while (pos_ < src_.size()) {
      if (at_line_start_) {
        if (!line_start()) continue;
      }
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        if (depth_ == 0 && !last_was_newline()) push(Tok::newline, "", loc());
        advance_line();
      } else if (c == '\\' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == '\n' || src_[pos_ + 1] == '\r')) {
        pos_ += src_[pos_ + 1] == '\r' ? 2 : 1;
        if (pos_ < src_.size() && src_[pos_] == '\n') advance_line(), at_line_start_ = false;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (string_start()) {
        lex_string();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        lex_number();
      } else if (ident_start(c)) {
        SourceLoc at = loc();
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
        push(Tok::name, std::string(src_.substr(start, pos_ - start)), at);
      } else {
        lex_op();
      }
    }
    if (!tokens_.empty() && !last_was_newline()) push(Tok::newline, "", loc());
    while (indents_.size() > 1) {
      indents_.pop_back();
      push(Tok::dedent, "", loc());
    }
    push(Tok::end, "", loc());
    return std::move(tokens_);
  }

 private:
  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
  }
  static bool ident_char(char c) {
    return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  SourceLoc loc() const { return SourceLoc{file_, line_, static_cast<int>(pos_ - line_begin_) + 1}; }

  [[noreturn]] void fail(const std::string& what) const { throw syntax_error(loc(), what); }

  void push(Tok kind, std::string text, SourceLoc at) { tokens_.push_back({kind, std::move(text), std::move(at)}); }

  bool last_was_newline() const {
    return tokens_.empty() || tokens_.back().kind == Tok::newline || tokens_.back().kind == Tok::indent ||
           tokens_.back().kind == Tok::dedent;
  }

  void advance_line() {
    ++pos_;
    ++line_;
    line_begin_ = pos_;
    at_line_start_ = depth_ == 0;
  }

  // Measures indentation at the start of a logical line. Returns false when
  // the line is blank or a comment, after consuming it.
  bool line_start() {
    int col = 0;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\f')) {
      col = src_[pos_] == '\t' ? (col / 8 + 1) * 8 : col + 1;
      ++pos_;
    }
    if (pos_ >= src_.size()) return false;
    char c = src_[pos_];
    if (c == '\r') {
      ++pos_;
      return false;
    }
    if (c == '#' ) {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      if (pos_ < src_.size()) advance_line();
      return false;
    }
    if (c == '\n') {
      advance_line();
      return false;
    }
    at_line_start_ = false;
    if (col > indents_.back()) {
      indents_.push_back(col);
      push(Tok::indent, "", loc());
    } else {
      while (col < indents_.back()) {
        indents_.pop_back();
        push(Tok::dedent, "", loc());
      }
      if (col != indents_.back()) fail("unindent does not match any outer indentation level");
    }
    return true;
  }

  bool string_start() const {
    std::size_t p = pos_;
    int prefix = 0;
    while (p < src_.size() && prefix < 2 && std::strchr("rRbBuUfF", src_[p]) && src_[p] != '\0') ++p, ++prefix;
    return p < src_.size() && (src_[p] == '\'' || src_[p] == '"');
  }

  void lex_string() {
    SourceLoc at = loc();
    std::size_t start = pos_;
    std::string prefix;
    while (src_[pos_] != '\'' && src_[pos_] != '"') prefix += static_cast<char>(std::tolower(src_[pos_++]));
    const bool raw = prefix.find('r') != std::string::npos;
    const char q = src_[pos_];
    const bool triple = src_.substr(pos_, 3) == std::string(3, q);
    pos_ += triple ? 3 : 1;
    std::string value;
    for (;;) {
      if (pos_ >= src_.size()) {
        pos_ = start;
        fail("unterminated string literal");
      }
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        char n = src_[pos_ + 1];
        if (n == '\n') {
          ++pos_;
          advance_line();
          at_line_start_ = false;
          continue;
        }
        value += raw ? std::string{c, n} : std::string(1, unescape(n));
        pos_ += 2;
        continue;
      }
      if (c == q && (!triple || src_.substr(pos_, 3) == std::string(3, q))) {
        pos_ += triple ? 3 : 1;
        break;
      }
      if (c == '\n') {
        if (!triple) fail("unterminated string literal");
        value += c;
        advance_line();
        at_line_start_ = false;
        continue;
      }
      value += c;
      ++pos_;
    }
    // The prefix is kept in front of a NUL so the parser can tell bytes
    // and f-strings apart without re-reading the source.
    push(Tok::string, prefix + '\0' + value, at);
  }

  static char unescape(char n) {
    switch (n) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      default: return n;
    }
  }

  void lex_number() {
    SourceLoc at = loc();
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        char c = src_[pos_];
        if ((c == 'e' || c == 'E') && pos_ + 1 < src_.size() && (src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-') &&
            src_.substr(start, 2) != "0x" && src_.substr(start, 2) != "0X")
          ++pos_;
        ++pos_;
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    push(Tok::number, std::string(src_.substr(start, pos_ - start)), at);
  }

  void lex_op() {
    static const char* const ops[] = {
        "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", ">>", "<<", "<=", ">=", "==", "!=",
        "+=",  "-=",  "*=",  "/=",  "%=",  "&=", "|=", "^=", "@=", "+",  "-",  "*",  "/",  "%",  "@",
        "&",   "|",   "^",   "~",   "<",   ">",  "(",  ")",  "[",  "]",  "{",  "}",  ",",  ":",  ".",
        ";",   "=",   "!",
    };
    SourceLoc at = loc();
    for (const char* op : ops) {
      std::string_view o(op);
      if (src_.substr(pos_, o.size()) != o) continue;
      pos_ += o.size();
      if (o == "(" || o == "[" || o == "{") ++depth_;
      if ((o == ")" || o == "]" || o == "}") && depth_ > 0) --depth_;
      push(Tok::op, std::string(o), at);
      return;
    }
    fail(std::string("unexpected character '") + src_[pos_] + "'");
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  std::size_t line_begin_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

inline std::vector<Token> tokenize(std::string_view src, std::string file = "") {
  return Lexer(src, std::move(file)).run();
}

}  // namespace pyts::py

#endif
