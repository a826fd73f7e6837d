#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pencil/error.hpp"
#include "pencil/rational.hpp"

namespace pencil {

using Exponents = std::vector<unsigned>;

/// Multivariate polynomial with exact rational coefficients in variables
/// u^1..u^N (0-based internally). Zero coefficients are never stored, so two
/// polynomials are equal exactly when their term maps are equal.
///
/// A default-constructed Poly has nvars() == 0; it exists so that Poly can
/// live in containers and is not meant for arithmetic.
class Poly {
 public:
  using TermMap = std::map<Exponents, Rational>;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t k);
  static Poly monomial(const Rational& c, Exponents exps);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  /// Total degree; -1 for the zero polynomial.
  int degree() const;

  /// Adds c * u^exps, dropping the term if the coefficient cancels.
  void add_term(const Exponents& exps, const Rational& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) = default;

  Rational evaluate(std::span<const Rational> point) const;
  double evaluate(std::span<const double> point) const;

  /// Embeds into a ring with more variables; the new variables are appended.
  Poly extend(std::size_t nvars) const;

  /// Human-readable form, e.g. "1/2*u1^2*u2 - 3". Variables default to u1..uN.
  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void check_same_ring(const Poly& o) const;

  std::size_t nvars_ = 0;
  TermMap terms_;
};

Poly poly_mul(const Poly& a, const Poly& b);

/// Exact partial derivative with respect to variable k (0-based).
Poly partial(const Poly& p, std::size_t k);

/// Total x-derivative of p(u) on the jet space (u, u_x): the result lives in
/// 2N variables where variable N + k stands for u^k_x.
Poly total_x_derivative(const Poly& p);

/// Names u1..uN, u1_x..uN_x for polynomials on the first jet space.
std::vector<std::string> jet_space_names(std::size_t nvars);

/// Thrown by one_form_potential when the 1-form A_k du^k is not closed.
class NotExactError : public Error {
 public:
  NotExactError(std::size_t k, std::size_t l, Poly residual, const std::string& context = {});
  std::size_t k() const { return k_; }
  std::size_t l() const { return l_; }
  /// dA_k/du^l - dA_l/du^k
  const Poly& residual() const { return residual_; }

 private:
  std::size_t k_, l_;
  Poly residual_;
};

/// Returns Phi with dPhi/du^k == A[k] and Phi(0) == 0. The 1-form is checked
/// for closedness first; a violation throws NotExactError naming the first
/// offending pair (k < l) in lexicographic order.
Poly one_form_potential(std::span<const Poly> A);

/// Every pair (k < l) with dA_k/du^l != dA_l/du^k; empty when the form is closed.
struct ClosednessDefect {
  std::size_t k, l;
  Poly residual;
};
std::vector<ClosednessDefect> closedness_defects(std::span<const Poly> A);

}  // namespace pencil
