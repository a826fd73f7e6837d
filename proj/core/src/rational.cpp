#include "pencil/rational.hpp"

#include <cctype>

#include "pencil/error.hpp"

namespace pencil {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::Schema, "rational with zero denominator");
  v_ = mpq_class(num, 1);
  v_ /= mpq_class(den, 1);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                               : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
    throw Error(ErrorCode::Schema, "malformed rational literal '" + std::string(text) + "'");
  }
  mpz_class q = parse_integer(den);
  if (q == 0) throw Error(ErrorCode::Schema, "zero denominator in '" + std::string(text) + "'");
  mpq_class v(parse_integer(num), q);
  return Rational(std::move(v));
}

std::optional<Rational> Rational::exact_sqrt() const {
  if (sign() < 0) return std::nullopt;
  const mpz_class& num = v_.get_num();
  const mpz_class& den = v_.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn = sqrt(num);
  mpz_class rd = sqrt(den);
  return Rational(mpq_class(rn, rd));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero rational");
  v_ /= o.v_;
  return *this;
}

}  // namespace pencil
