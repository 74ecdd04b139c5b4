#ifndef PYTS_TYPE_PARSER_HPP
#define PYTS_TYPE_PARSER_HPP

// Reader for the canonical text form produced by to_text(). ASCII and
// Unicode spellings are both accepted: `forall`/`∀`, `exists`/`∃`,
// `->`/`→`, `x`/`×`, `...`/`…`.
//
// An identifier is a variable when an enclosing quantifier binds it or when
// it is listed in `free_vars`; otherwise it is an atom (or the head of an
// application when followed by `[`). `Any` is the wildcard.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "pyts/type_ops.hpp"

namespace pyts {

namespace detail {

class TypeTextParser {
 public:
  TypeTextParser(std::string_view text, VarSet free_vars)
      : text_(text), scope_(std::move(free_vars)) {}

  TypeExpr parse_complete() {
    TypeExpr t = parse_type();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

  TypeExpr parse_type() {
    skip_ws();
    if (eat("∀") || eat_word("forall")) return parse_forall();
    if (eat("∃") || eat_word("exists")) return parse_exists();
    return parse_function();
  }

  bool at_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    return end >= text_.size() || !ident_char(text_[end]);
  }

  bool eat_word(std::string_view w) {
    if (!at_word(w)) return false;
    pos_ += w.size();
    return true;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && ident_start(text_[pos_])) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      while (pos_ < text_.size() && text_[pos_] == '\'') ++pos_;
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::syntax_error,
                "type text at offset " + std::to_string(pos_) + ": " + what + " in '" +
                    std::string(text_) + "'");
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

 private:
  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  bool eat_ellipsis() { return eat("...") || eat("…"); }

  TypeExpr parse_forall() {
    std::vector<std::string> vars{ident()};
    while (eat(",")) vars.push_back(ident());
    expect(".");
    VarSet saved = scope_;
    scope_.insert(vars.begin(), vars.end());
    TypeExpr body = parse_type();
    scope_ = std::move(saved);
    return make_forall(std::move(vars), std::move(body));
  }

  TypeExpr parse_exists() {
    std::string var = ident();
    VarSet saved = scope_;
    scope_.insert(var);
    std::optional<TypeExpr> bound;
    if (eat("<:")) bound = parse_sum();
    expect(".");
    TypeExpr body = parse_type();
    scope_ = std::move(saved);
    return make_exists(std::move(var), std::move(bound), std::move(body));
  }

  TypeExpr parse_function() {
    TypeExpr domain = parse_sum();
    if (eat("->") || eat("→")) {
      skip_ws();
      TypeExpr codomain = (at_quantifier()) ? parse_type() : parse_function();
      return make_function(std::move(domain), std::move(codomain));
    }
    return domain;
  }

  bool at_quantifier() {
    skip_ws();
    return text_.substr(pos_, 3) == "∀" || text_.substr(pos_, 3) == "∃" || at_word("forall") ||
           at_word("exists");
  }

  TypeExpr parse_sum() {
    std::vector<TypeExpr> alts{parse_product()};
    while (eat("+")) alts.push_back(parse_product());
    return alts.size() == 1 ? alts.front() : make_sum(std::move(alts));
  }

  TypeExpr parse_product() {
    std::vector<TypeExpr> factors{parse_primary()};
    while (eat("×") || eat_word("x")) factors.push_back(parse_primary());
    return factors.size() == 1 ? factors.front() : make_product(std::move(factors));
  }

  TypeExpr parse_primary() {
    skip_ws();
    if (eat("(")) {
      TypeExpr inner = parse_type();
      expect(")");
      return inner;
    }
    if (eat("{")) return parse_record();
    if (at_quantifier()) return parse_type();
    std::string name = ident();
    if (eat("[")) return parse_application(std::move(name));
    if (scope_.count(name)) return make_var(std::move(name));
    if (name == "Any") return make_any();
    return make_atom(std::move(name));
  }

  TypeExpr parse_application(std::string constructor) {
    std::vector<TypeExpr> args;
    if (eat("]")) return make_apply(std::move(constructor), {});
    args.push_back(parse_type());
    while (eat(",")) {
      if (eat_ellipsis()) {
        expect("]");
        if (args.size() != 1) fail("a variadic application takes exactly one element type");
        return make_variadic(std::move(constructor), std::move(args.front()));
      }
      args.push_back(parse_type());
    }
    expect("]");
    return make_apply(std::move(constructor), std::move(args));
  }

  TypeExpr parse_record() {
    std::vector<node::Field> fields;
    bool open = false;
    if (eat("}")) return make_record({}, false);
    do {
      if (eat_ellipsis()) {
        open = true;
        break;
      }
      std::string name = ident();
      expect(":");
      fields.push_back({std::move(name), parse_type()});
    } while (eat(","));
    expect("}");
    return make_record(std::move(fields), open);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  VarSet scope_;
};

}  // namespace detail

inline TypeExpr parse_type(std::string_view text, VarSet free_vars = {}) {
  return detail::TypeTextParser(text, std::move(free_vars)).parse_complete();
}

}  // namespace pyts

#endif
