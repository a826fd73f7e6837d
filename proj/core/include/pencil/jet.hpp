#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pencil/poly.hpp"
#include "pencil/rational.hpp"
#include "pencil/tensor.hpp"

namespace pencil {

/// Truncated derivative tower of a scalar at a base point: the value and all
/// partial derivatives up to `order` (at most 3). Stores derivative values,
/// not Taylor coefficients; every slot is kept symmetric in its indices.
class Jet {
 public:
  static constexpr int kMaxOrder = 3;

  Jet() = default;
  Jet(std::size_t nvars, int order);

  static Jet constant(std::size_t nvars, int order, const Rational& c);

  std::size_t nvars() const { return n_; }
  int order() const { return order_; }

  const Rational& value() const { return d0_; }
  const Rational& d(std::size_t i) const;
  const Rational& d(std::size_t i, std::size_t j) const;
  const Rational& d(std::size_t i, std::size_t j, std::size_t k) const;

  void set_value(const Rational& v) { d0_ = v; }
  /// Setters write every permutation of the index tuple.
  void set_d(std::size_t i, const Rational& v);
  void set_d(std::size_t i, std::size_t j, const Rational& v);
  void set_d(std::size_t i, std::size_t j, std::size_t k, const Rational& v);

  /// Jet of the partial derivative along k; its order is one lower.
  Jet partial(std::size_t k) const;
  Jet truncated(int order) const;
  bool is_zero() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Rational& c);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Rational& c) { return a *= c; }
  friend Jet operator*(const Rational& c, Jet a) { return a *= c; }
  /// Leibniz product, truncated to the smaller of the two orders.
  friend Jet operator*(const Jet& a, const Jet& b);

  friend bool operator==(const Jet&, const Jet&) = default;

 private:
  void check_compatible(const Jet& o) const;

  std::size_t n_ = 0;
  int order_ = 0;
  Rational d0_;
  std::vector<Rational> d1_, d2_, d3_;
};

/// Exact derivative values of p at point up to the given order (0..3).
Jet eval_jet(const Poly& p, std::span<const Rational> point, int order);

Matrix<Jet> eval_jet(const Matrix<Poly>& m, std::span<const Rational> point, int order);

/// Jets of the inverse matrix, same order as the input. Throws
/// Error(SingularMetric) when the value part is singular.
Matrix<Jet> matrix_inverse_jet(const Matrix<Jet>& g);

Matrix<Jet> operator*(const Matrix<Jet>& a, const Matrix<Jet>& b);

Matrix<Rational> identity_matrix(std::size_t n);
Matrix<Rational> value_part(const Matrix<Jet>& m);
Rational determinant(Matrix<Rational> m);
/// Exact Gauss-Jordan inverse; throws Error(singular_code) when singular.
Matrix<Rational> inverse(const Matrix<Rational>& m, ErrorCode singular_code = ErrorCode::SingularMetric);
Matrix<Rational> operator*(const Matrix<Rational>& a, const Matrix<Rational>& b);

}  // namespace pencil
