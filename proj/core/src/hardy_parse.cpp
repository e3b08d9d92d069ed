#include <cctype>

#include "hardynil/errors.hpp"
#include "hardynil/hardy.hpp"

namespace hardynil::hardy {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  HardyExpr parse_all() {
    HardyExpr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string_view identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return text_.substr(start, pos_ - start);
  }
  std::string_view peek_identifier() {
    std::size_t save = pos_;
    std::string_view id = identifier();
    pos_ = save;
    return id;
  }

  // digits ['/' digits] | digits '.' digits
  Rational number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    } else if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (start == pos_) fail("expected a number");
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const std::invalid_argument& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  // '{' signed-rational '}' | '(' signed-rational ')' | signed-rational
  Rational exponent() {
    char close = '\0';
    if (accept('{'))
      close = '}';
    else if (accept('('))
      close = ')';
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    Rational r = number();
    if (close != '\0') expect(close);
    return negative ? Rational(-r) : r;
  }

  HardyExpr parse_sum() {
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    HardyExpr sum = parse_term();
    if (negative) sum = -sum;
    for (;;) {
      if (accept('+'))
        sum = sum + parse_term();
      else if (accept('-'))
        sum = sum - parse_term();
      else
        break;
    }
    return sum;
  }

  HardyExpr parse_term() {
    const std::size_t term_start = pos_;
    Coefficient coeff(1);
    bool has_constant = false;
    bool has_any = false;
    Rational power = 0;
    int logpow = 0;

    auto at_variable = [&] {
      std::string_view id = peek_identifier();
      return id == "t" || id == "log";
    };

    // Coefficient factors.
    while (!at_variable()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff = coeff * number();
      } else if (c == '(') {
        ++pos_;
        const std::size_t inner_start = pos_;
        HardyExpr inner = parse_sum();
        expect(')');
        if (inner.terms().size() > 1 || (!inner.is_zero() && !inner.terms().front().is_constant())) {
          pos_ = inner_start;
          fail("parenthesized coefficient must be a constant");
        }
        Coefficient ic = inner.constant_term();
        if (has_constant && !ic.is_rational()) fail("products of named constants are not supported");
        has_constant = has_constant || !ic.is_rational();
        if (coeff.is_rational())
          coeff = ic * coeff.rational_part();
        else if (ic.is_rational())
          coeff = coeff * ic.rational_part();
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t id_start = pos_;
        std::string_view id = identifier();
        auto k = find_constant(id);
        if (!k) {
          pos_ = id_start;
          fail("unknown constant '" + std::string(id) + "'");
        }
        if (has_constant) {
          pos_ = id_start;
          fail("products of named constants are not supported");
        }
        has_constant = true;
        coeff = Coefficient::named(*k, coeff.rational_part());
      } else {
        if (!has_any) fail("expected a term");
        fail("expected 't', 'log(t)' or a coefficient after '*'");
      }
      has_any = true;
      if (!accept('*')) break;
    }

    if (peek_identifier() == "t") {
      identifier();
      power = 1;
      has_any = true;
      if (accept('^')) power = exponent();
      std::size_t save = pos_;
      if (accept('*')) {
        if (peek_identifier() != "log") {
          pos_ = save;
          ++pos_;
          fail("expected 'log(t)' after 't*'");
        }
      }
    }
    if (peek_identifier() == "log") {
      identifier();
      has_any = true;
      expect('(');
      if (identifier() != "t") fail("expected 'log(t)'");
      expect(')');
      logpow = 1;
      if (accept('^')) {
        const std::size_t exp_start = pos_;
        Rational e = exponent();
        if (!is_integer(e)) {
          pos_ = exp_start;
          fail("log exponent must be an integer");
        }
        logpow = static_cast<int>(to_int64(numerator(e)));
      }
    }
    if (!has_any) {
      pos_ = term_start;
      fail("expected a term");
    }
    return HardyExpr::monomial(coeff, power, logpow);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

HardyExpr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace hardynil::hardy
