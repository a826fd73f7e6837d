#include "pencil/jet.hpp"

#include <algorithm>

namespace pencil {

Jet::Jet(std::size_t nvars, int order) : n_(nvars), order_(order) {
  if (order < 0 || order > kMaxOrder) throw Error(ErrorCode::IndexOutOfRange, "jet order must lie in 0..3");
  if (order >= 1) d1_.assign(n_, Rational());
  if (order >= 2) d2_.assign(n_ * n_, Rational());
  if (order >= 3) d3_.assign(n_ * n_ * n_, Rational());
}

Jet Jet::constant(std::size_t nvars, int order, const Rational& c) {
  Jet j(nvars, order);
  j.d0_ = c;
  return j;
}

const Rational& Jet::d(std::size_t i) const {
  if (order_ < 1 || i >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  return d1_[i];
}

const Rational& Jet::d(std::size_t i, std::size_t j) const {
  if (order_ < 2 || i >= n_ || j >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  return d2_[i * n_ + j];
}

const Rational& Jet::d(std::size_t i, std::size_t j, std::size_t k) const {
  if (order_ < 3 || i >= n_ || j >= n_ || k >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  return d3_[(i * n_ + j) * n_ + k];
}

void Jet::set_d(std::size_t i, const Rational& v) {
  if (order_ < 1 || i >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  d1_[i] = v;
}

void Jet::set_d(std::size_t i, std::size_t j, const Rational& v) {
  if (order_ < 2 || i >= n_ || j >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  d2_[i * n_ + j] = v;
  d2_[j * n_ + i] = v;
}

void Jet::set_d(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
  if (order_ < 3 || i >= n_ || j >= n_ || k >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet slot out of range");
  std::array<std::size_t, 3> idx{i, j, k};
  std::sort(idx.begin(), idx.end());
  do {
    d3_[(idx[0] * n_ + idx[1]) * n_ + idx[2]] = v;
  } while (std::next_permutation(idx.begin(), idx.end()));
}

Jet Jet::partial(std::size_t k) const {
  if (order_ < 1) throw Error(ErrorCode::IndexOutOfRange, "cannot differentiate an order-0 jet");
  if (k >= n_) throw Error(ErrorCode::IndexOutOfRange, "jet derivative index out of range");
  Jet out(n_, order_ - 1);
  out.d0_ = d1_[k];
  for (std::size_t i = 0; i < n_ && order_ >= 2; ++i) {
    out.d1_[i] = d2_[k * n_ + i];
    for (std::size_t j = 0; j < n_ && order_ >= 3; ++j) out.d2_[i * n_ + j] = d3_[(k * n_ + i) * n_ + j];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw Error(ErrorCode::IndexOutOfRange, "cannot raise jet order");
  Jet out(n_, order);
  out.d0_ = d0_;
  if (order >= 1) out.d1_ = d1_;
  if (order >= 2) out.d2_ = d2_;
  if (order >= 3) out.d3_ = d3_;
  return out;
}

bool Jet::is_zero() const {
  auto zero = [](const Rational& r) { return r.is_zero(); };
  return d0_.is_zero() && std::all_of(d1_.begin(), d1_.end(), zero) &&
         std::all_of(d2_.begin(), d2_.end(), zero) && std::all_of(d3_.begin(), d3_.end(), zero);
}

void Jet::check_compatible(const Jet& o) const {
  if (n_ != o.n_) throw Error(ErrorCode::DimensionMismatch, "jets over different variable counts");
}

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(o);
  if (o.order_ < order_) *this = truncated(o.order_);
  d0_ += o.d0_;
  for (std::size_t i = 0; i < d1_.size(); ++i) d1_[i] += o.d1_[i];
  for (std::size_t i = 0; i < d2_.size(); ++i) d2_[i] += o.d2_[i];
  for (std::size_t i = 0; i < d3_.size(); ++i) d3_[i] += o.d3_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  Jet neg = o;
  neg *= Rational(-1);
  return *this += neg;
}

Jet& Jet::operator*=(const Rational& c) {
  d0_ *= c;
  for (auto& v : d1_) v *= c;
  for (auto& v : d2_) v *= c;
  for (auto& v : d3_) v *= c;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  const std::size_t n = a.n_;
  const int order = std::min(a.order_, b.order_);
  Jet out(n, order);
  out.d0_ = a.d0_ * b.d0_;
  if (order < 1) return out;
  for (std::size_t i = 0; i < n; ++i) out.d1_[i] = a.d1_[i] * b.d0_ + a.d0_ * b.d1_[i];
  if (order < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.d2_[i * n + j] = a.d2_[i * n + j] * b.d0_ + a.d1_[i] * b.d1_[j] + a.d1_[j] * b.d1_[i] +
                           a.d0_ * b.d2_[i * n + j];
    }
  }
  if (order < 3) return out;
  auto a2 = [&](std::size_t i, std::size_t j) -> const Rational& { return a.d2_[i * n + j]; };
  auto b2 = [&](std::size_t i, std::size_t j) -> const Rational& { return b.d2_[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t ijk = (i * n + j) * n + k;
        out.d3_[ijk] = a.d3_[ijk] * b.d0_ + a2(i, j) * b.d1_[k] + a2(i, k) * b.d1_[j] + a2(j, k) * b.d1_[i] +
                       a.d1_[i] * b2(j, k) + a.d1_[j] * b2(i, k) + a.d1_[k] * b2(i, j) + a.d0_ * b.d3_[ijk];
      }
    }
  }
  return out;
}

Jet eval_jet(const Poly& p, std::span<const Rational> point, int order) {
  const std::size_t n = p.nvars();
  if (point.size() != n) throw Error(ErrorCode::DimensionMismatch, "jet base point has wrong length");
  Jet out(n, order);
  out.set_value(p.evaluate(point));
  for (std::size_t i = 0; i < n && order >= 1; ++i) {
    const Poly pi = partial(p, i);
    out.set_d(i, pi.evaluate(point));
    for (std::size_t j = i; j < n && order >= 2; ++j) {
      const Poly pij = partial(pi, j);
      out.set_d(i, j, pij.evaluate(point));
      for (std::size_t k = j; k < n && order >= 3; ++k) out.set_d(i, j, k, partial(pij, k).evaluate(point));
    }
  }
  return out;
}

Matrix<Jet> eval_jet(const Matrix<Poly>& m, std::span<const Rational> point, int order) {
  const std::size_t n = m.extent();
  Matrix<Jet> out(n, Jet());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = eval_jet(m(i, j), point, order);
  }
  return out;
}

Matrix<Jet> operator*(const Matrix<Jet>& a, const Matrix<Jet>& b) {
  const std::size_t n = a.extent();
  if (b.extent() != n) throw Error(ErrorCode::DimensionMismatch, "matrix extents differ");
  Matrix<Jet> out(n, Jet());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Jet acc = a(i, 0) * b(0, j);
      for (std::size_t s = 1; s < n; ++s) acc += a(i, s) * b(s, j);
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

Matrix<Rational> identity_matrix(std::size_t n) {
  Matrix<Rational> id(n, Rational());
  for (std::size_t i = 0; i < n; ++i) id(i, i) = Rational(1);
  return id;
}

Matrix<Rational> value_part(const Matrix<Jet>& m) {
  const std::size_t n = m.extent();
  Matrix<Rational> out(n, Rational());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j).value();
  }
  return out;
}

Rational determinant(Matrix<Rational> m) {
  const std::size_t n = m.extent();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(pivot, k));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      const Rational f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

Matrix<Rational> inverse(const Matrix<Rational>& m, ErrorCode singular_code) {
  const std::size_t n = m.extent();
  Matrix<Rational> a = m;
  Matrix<Rational> inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a(pivot, c).is_zero()) ++pivot;
    if (pivot == n) throw Error(singular_code, "matrix is singular");
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(c, k), a(pivot, k));
        std::swap(inv(c, k), inv(pivot, k));
      }
    }
    const Rational p = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= p;
      inv(c, k) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const Rational f = a(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

Matrix<Rational> operator*(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  const std::size_t n = a.extent();
  if (b.extent() != n) throw Error(ErrorCode::DimensionMismatch, "matrix extents differ");
  Matrix<Rational> out(n, Rational());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < n; ++s) out(i, j) += a(i, s) * b(s, j);
    }
  }
  return out;
}

Matrix<Jet> matrix_inverse_jet(const Matrix<Jet>& g) {
  const std::size_t n = g.extent();
  if (n == 0) return g;
  const std::size_t nv = g(0, 0).nvars();
  int order = Jet::kMaxOrder;
  for (const Jet& j : g) order = std::min(order, j.order());

  const Matrix<Rational> h0 = inverse(value_part(g), ErrorCode::SingularMetric);
  Matrix<Jet> h0_jet(n, Jet());
  Matrix<Jet> perturbation(n, Jet());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      h0_jet(i, j) = Jet::constant(nv, order, h0(i, j));
      perturbation(i, j) = g(i, j).truncated(order);
      perturbation(i, j).set_value(Rational());
    }
  }
  // H = H0 - H0 E H with E nilpotent in truncated jet arithmetic: `order`
  // sweeps of the fixed point reproduce the exact Neumann series.
  Matrix<Jet> h = h0_jet;
  const Matrix<Jet> h0e = h0_jet * perturbation;
  for (int it = 0; it < order; ++it) {
    const Matrix<Jet> corr = h0e * h;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) h(i, j) = h0_jet(i, j) - corr(i, j);
    }
  }
  return h;
}

}  // namespace pencil
