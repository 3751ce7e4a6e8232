#ifndef ROLEC_PARSE_HPP
#define ROLEC_PARSE_HPP

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "rolec/term.hpp"

namespace rolec {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// How identifiers outside the signature are interpreted.
///  Ground:  free constants; the reserved names x_<n>/v_<n> are rejected.
///  Pattern: names listed in `vars` become rule variables, the rest free
///           constants; reserved names are rejected.
///  Recipe:  x_<n> and v_<n> become holes (both map to strand position n),
///           anything else undeclared is rejected (contexts may not
///           contain free constants).
enum class TermMode { Ground, Pattern, Recipe };

namespace detail {

inline std::optional<int> reserved_hole_index(const std::string& id) {
  if (id.size() < 3 || (id[0] != 'x' && id[0] != 'v') || id[1] != '_')
    return std::nullopt;
  int value = 0;
  for (std::size_t i = 2; i < id.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(id[i]))) return std::nullopt;
    value = value * 10 + (id[i] - '0');
  }
  return value;
}

class TermParser {
 public:
  TermParser(std::string_view text, const Signature& sig, TermMode mode,
             const std::set<std::string>* vars, bool xor_infix)
      : text_(text), sig_(sig), mode_(mode), vars_(vars), xor_infix_(xor_infix) {}

  Term parse() {
    Term t = expression();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input after term");
    return t;
  }

 private:
  Term expression() {
    Term t = primary();
    while (xor_infix_ && peek_xor_op()) {
      consume_xor_op();
      Term rhs = primary();
      t = Term::fun("xor", {std::move(t), std::move(rhs)});
    }
    return t;
  }

  Term primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '0') {
      ++pos_;
      if (!sig_.declares("0")) fail("constant 0 is not part of this theory");
      return Term::fun("0");
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected identifier");
    std::string id = identifier();
    skip_space();
    std::vector<Term> args;
    bool has_parens = false;
    if (pos_ < text_.size() && text_[pos_] == '(' && !at_xor_op()) {
      has_parens = true;
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          args.push_back(expression());
          skip_space();
          if (pos_ >= text_.size()) fail("unterminated argument list");
          if (text_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (text_[pos_] == ')') {
            ++pos_;
            break;
          }
          fail("expected ',' or ')' in argument list");
        }
      }
    }
    return classify(id, std::move(args), has_parens);
  }

  Term classify(const std::string& id, std::vector<Term> args, bool has_parens) {
    if (const Symbol* sym = sig_.find(id)) {
      if (static_cast<int>(args.size()) != sym->arity)
        fail("symbol " + id + " expects " + std::to_string(sym->arity) +
             " argument(s), got " + std::to_string(args.size()));
      return Term::fun(id, std::move(args));
    }
    if (has_parens || !args.empty())
      fail("unknown function symbol " + id);
    auto hole = reserved_hole_index(id);
    switch (mode_) {
      case TermMode::Ground:
        if (hole) fail("identifier " + id + " is reserved for context holes");
        return Term::constant(id);
      case TermMode::Pattern:
        if (hole) fail("identifier " + id + " is reserved for context holes");
        if (vars_ && vars_->count(id)) return Term::var(id);
        return Term::constant(id);
      case TermMode::Recipe:
        if (hole) {
          if (*hole < 1) fail("hole index must be positive in " + id);
          return Term::hole(*hole);
        }
        fail("free constant " + id + " is not allowed in a context");
    }
    fail("unreachable");
    return Term::constant(id);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool at_xor_op() const {
    return xor_infix_ && pos_ + 2 < text_.size() && text_[pos_] == '(' &&
           text_[pos_ + 1] == '+' && text_[pos_ + 2] == ')';
  }
  bool peek_xor_op() {
    skip_space();
    return at_xor_op();
  }
  void consume_xor_op() { pos_ += 3; }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos_);
  }

  std::string_view text_;
  const Signature& sig_;
  TermMode mode_;
  const std::set<std::string>* vars_;
  bool xor_infix_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a ground message term; undeclared identifiers are free constants.
inline Term parse_term(std::string_view text, const Signature& sig,
                       bool xor_infix = false) {
  return detail::TermParser(text, sig, TermMode::Ground, nullptr, xor_infix)
      .parse();
}

/// Parses a rewrite-rule side; names in `vars` become rule variables.
inline Term parse_pattern(std::string_view text, const Signature& sig,
                          const std::set<std::string>& vars) {
  return detail::TermParser(text, sig, TermMode::Pattern, &vars, false).parse();
}

/// Parses a context/recipe; x_i and v_i denote strand position i.
inline Term parse_recipe(std::string_view text, const Signature& sig,
                         bool xor_infix = false) {
  return detail::TermParser(text, sig, TermMode::Recipe, nullptr, xor_infix)
      .parse();
}

}  // namespace rolec

#endif  // ROLEC_PARSE_HPP
