#include "skewform/form_parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "skewform/errors.hpp"

namespace skewform {

namespace {

constexpr unsigned kMaxExponent = 64;

class Parser {
 public:
  Parser(std::string_view text, const MuMatrix& mu) : text_(text), mu_(mu) {}

  SkewPoly run() {
    skip_space();
    if (at_end()) throw ParseError(pos_, "empty input");
    auto value = expr();
    skip_space();
    if (!at_end()) throw ParseError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    return value;
  }

 private:
  SkewPoly expr() {
    skip_space();
    Scalar sign{1.0};
    if (peek() == '+' || peek() == '-') {
      if (peek() == '-') sign = -1.0;
      ++pos_;
    }
    SkewPoly acc = sign * term();
    for (;;) {
      skip_space();
      const char ch = peek();
      if (ch != '+' && ch != '-') return acc;
      ++pos_;
      auto rhs = term();
      acc = ch == '+' ? acc + rhs : acc - rhs;
    }
  }

  SkewPoly term() {
    SkewPoly acc = factor();
    for (;;) {
      skip_space();
      if (peek() == '*') {
        ++pos_;
        acc = acc * factor();
      } else if (starts_primary(peek())) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  SkewPoly factor() {
    SkewPoly base = primary();
    skip_space();
    if (peek() != '^') return base;
    ++pos_;
    skip_space();
    const std::size_t at = pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError(at, "expected a non-negative integer exponent");
    const unsigned e = read_uint("exponent");
    if (e > kMaxExponent) throw ParseError(at, "exponent too large");
    SkewPoly out = SkewPoly::constant(mu_, 1.0);
    for (unsigned k = 0; k < e; ++k) out = out * base;
    return out;
  }

  SkewPoly primary() {
    skip_space();
    const std::size_t at = pos_;
    const char ch = peek();
    if (ch == '(') {
      ++pos_;
      auto inner = expr();
      skip_space();
      if (peek() != ')') throw ParseError(pos_, "expected ')' to close '(' at position " + std::to_string(at));
      ++pos_;
      return inner;
    }
    if (ch == 'z') {
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError(pos_, "expected generator index after 'z'");
      const unsigned idx = read_uint("generator index");
      if (idx == 0 || idx > mu_.n())
        throw ParseError(at, "generator z" + std::to_string(idx) + " out of range 1.." + std::to_string(mu_.n()));
      return SkewPoly::generator(mu_, idx - 1);
    }
    if (ch == 'i') {
      ++pos_;
      return SkewPoly::constant(mu_, Scalar{0.0, 1.0});
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      const double v = read_decimal();
      if (peek() == 'i') {
        ++pos_;
        return SkewPoly::constant(mu_, Scalar{0.0, v});
      }
      return SkewPoly::constant(mu_, v);
    }
    if (at_end()) throw ParseError(pos_, "unexpected end of input");
    throw ParseError(pos_, std::string("unexpected '") + ch + "'");
  }

  double read_decimal() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t from = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      return pos_ > from;
    };
    const bool int_part = digits();
    bool frac_part = false;
    if (peek() == '.') {
      ++pos_;
      frac_part = digits();
    }
    if (!int_part && !frac_part) throw ParseError(start, "malformed number");
    if (peek() == '.') throw ParseError(pos_, "malformed number");
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t mark = pos_;
      ++pos_;
      if (peek() == '+' || peek() == '-') ++pos_;
      if (!digits()) throw ParseError(mark, "malformed exponent");
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(lexeme.c_str(), &end);
    if (!std::isfinite(v)) throw ParseError(start, "number out of range");
    return v;
  }

  unsigned read_uint(const char* what) {
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    unsigned v = 0;
    auto [p, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{}) throw ParseError(start, std::string(what) + " out of range");
    return v;
  }

  static bool starts_primary(char ch) {
    return ch == '(' || ch == 'z' || ch == 'i' || ch == '.' || std::isdigit(static_cast<unsigned char>(ch));
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[nodiscard]] bool at_end() const { return pos_ >= text_.size(); }
  [[nodiscard]] char peek() const { return at_end() ? '\0' : text_[pos_]; }

  std::string_view text_;
  const MuMatrix& mu_;
  std::size_t pos_ = 0;
};

std::string monomial_text(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.exponents.size(); ++i) {
    const unsigned e = m.exponents[i];
    if (e == 0) continue;
    if (!s.empty()) s += ' ';
    s += 'z' + std::to_string(i + 1);
    if (e > 1) s += '^' + std::to_string(e);
  }
  return s;
}

// Sign of the term and the text of its magnitude; empty text means a unit
// coefficient in front of a monomial.
std::pair<bool, std::string> split_sign(Scalar c, bool has_monomial) {
  const double re = c.real();
  const double im = c.imag();
  if (im == 0.0) {
    const double mag = std::abs(re);
    return {re < 0.0, (mag == 1.0 && has_monomial) ? std::string{} : format_number(mag)};
  }
  if (re == 0.0) {
    const double mag = std::abs(im);
    return {im < 0.0, mag == 1.0 ? std::string("i") : format_number(mag) + "i"};
  }
  const bool neg = re < 0.0;
  const Scalar p = neg ? -c : c;
  return {neg, "(" + format_number(p.real()) + (p.imag() < 0.0 ? "-" : "+") + format_number(std::abs(p.imag())) + "i)"};
}

}  // namespace

SkewPoly parse(std::string_view text, const MuMatrix& mu, Tolerance tol) {
  return Parser(text, mu).run().pruned(tol);
}

QuadraticForm to_quadratic_form(const SkewPoly& p, Tolerance tol) { return QuadraticForm::from_poly(p, tol); }

QuadraticForm parse_quadratic(std::string_view text, const MuMatrix& mu, Tolerance tol) {
  return to_quadratic_form(parse(text, mu, tol), tol);
}

std::size_t max_generator_index(std::string_view text) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != 'z') continue;
    std::size_t j = k + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t v = 0;
    if (j > k + 1 && std::from_chars(text.data() + k + 1, text.data() + j, v).ec == std::errc{}) best = std::max(best, v);
  }
  return best;
}

std::string format_number(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string format_scalar(Scalar c) {
  auto [neg, text] = split_sign(c, false);
  return neg ? "-" + text : text;
}

std::string print(const SkewPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    const std::string mono = monomial_text(m);
    auto [neg, coeff] = split_sign(c, !mono.empty());
    std::string term = coeff;
    if (!coeff.empty() && !mono.empty()) term += ' ';
    term += mono;
    if (first) {
      out = neg ? "-" + term : term;
      first = false;
    } else {
      out += neg ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

std::string print(const LinearForm& l) { return print(l.to_poly()); }

std::string print(const QuadraticForm& q) { return print(q.to_poly()); }

std::string print(const Factorization& f) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ZeroForm>) {
          return "0";
        } else if constexpr (std::is_same_v<T, Square>) {
          return "(" + print(s.l) + ")^2";
        } else if constexpr (std::is_same_v<T, Product>) {
          return "(" + print(s.l1) + ")(" + print(s.l2) + ")";
        } else {
          return "(" + print(s.l1) + ")(" + print(s.l2) + ") + (" + print(s.l3) + ")^2";
        }
      },
      f.shape);
}

}  // namespace skewform
