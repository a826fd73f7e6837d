#include "pencil/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pencil {

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t k) {
  if (k >= nvars) throw Error(ErrorCode::IndexOutOfRange, "variable index out of range");
  Exponents e(nvars, 0);
  e[k] = 1;
  Poly p(nvars);
  p.add_term(e, Rational(1));
  return p;
}

Poly Poly::monomial(const Rational& c, Exponents exps) {
  Poly p(exps.size());
  p.add_term(exps, c);
  return p;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
}

Rational Poly::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Poly::degree() const {
  int deg = -1;
  for (const auto& [e, c] : terms_) {
    deg = std::max(deg, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
  }
  return deg;
}

void Poly::add_term(const Exponents& exps, const Rational& c) {
  if (exps.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "exponent vector length differs from nvars");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Poly::check_same_ring(const Poly& o) const {
  if (nvars_ != o.nvars_) {
    throw Error(ErrorCode::DimensionMismatch,
                "polynomials over " + std::to_string(nvars_) + " and " + std::to_string(o.nvars_) + " variables");
  }
}

Poly& Poly::operator+=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_ring(b);
  Poly out(a.nvars_);
  Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

Rational Poly::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  Rational sum;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t k = 0; k < nvars_; ++k) {
      for (unsigned p = 0; p < e[k]; ++p) t *= point[k];
    }
    sum += t;
  }
  return sum;
}

double Poly::evaluate(std::span<const double> point) const {
  if (point.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (std::size_t k = 0; k < nvars_; ++k) t *= std::pow(point[k], static_cast<int>(e[k]));
    sum += t;
  }
  return sum;
}

Poly Poly::extend(std::size_t nvars) const {
  if (nvars < nvars_) throw Error(ErrorCode::DimensionMismatch, "cannot shrink polynomial ring");
  Poly out(nvars);
  for (const auto& [e, c] : terms_) {
    Exponents f(nvars, 0);
    std::copy(e.begin(), e.end(), f.begin());
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

std::string Poly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t k) { return k < names.size() ? names[k] : "u" + std::to_string(k + 1); };
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += name(k);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    const Rational mag = c.abs();
    std::string term;
    if (mono.empty()) {
      term = mag.str();
    } else if (mag == Rational(1)) {
      term = mono;
    } else {
      term = mag.str() + "*" + mono;
    }
    if (first) {
      out = (c.sign() < 0 ? "-" : "") + term;
      first = false;
    } else {
      out += (c.sign() < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }

Poly partial(const Poly& p, std::size_t k) {
  if (k >= p.nvars()) throw Error(ErrorCode::IndexOutOfRange, "partial derivative index out of range");
  Poly out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[k] == 0) continue;
    Exponents f = e;
    f[k] -= 1;
    out.add_term(f, c * Rational(static_cast<long>(e[k])));
  }
  return out;
}

Poly total_x_derivative(const Poly& p) {
  const std::size_t n = p.nvars();
  Poly out(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    out += partial(p, k).extend(2 * n) * Poly::variable(2 * n, n + k);
  }
  return out;
}

std::vector<std::string> jet_space_names(std::size_t nvars) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < nvars; ++k) names.push_back("u" + std::to_string(k + 1));
  for (std::size_t k = 0; k < nvars; ++k) names.push_back("u" + std::to_string(k + 1) + "_x");
  return names;
}

NotExactError::NotExactError(std::size_t k, std::size_t l, Poly residual, const std::string& context)
    : Error(ErrorCode::NotExact, (context.empty() ? "" : context + ": ") + "1-form not closed at pair (" +
                                     std::to_string(k + 1) + "," + std::to_string(l + 1) + "): residual " +
                                     residual.str()),
      k_(k),
      l_(l),
      residual_(std::move(residual)) {}

std::vector<ClosednessDefect> closedness_defects(std::span<const Poly> A) {
  std::vector<ClosednessDefect> out;
  for (std::size_t k = 0; k < A.size(); ++k) {
    if (A[k].nvars() != A.size()) throw Error(ErrorCode::DimensionMismatch, "1-form component over wrong ring");
    for (std::size_t l = k + 1; l < A.size(); ++l) {
      Poly r = partial(A[k], l) - partial(A[l], k);
      if (!r.is_zero()) out.push_back({k, l, std::move(r)});
    }
  }
  return out;
}

Poly one_form_potential(std::span<const Poly> A) {
  if (A.empty()) throw Error(ErrorCode::DimensionMismatch, "empty 1-form");
  auto defects = closedness_defects(A);
  if (!defects.empty()) {
    throw NotExactError(defects.front().k, defects.front().l, std::move(defects.front().residual));
  }
  // Radial homotopy: Phi(u) = int_0^1 A_k(t u) u^k dt, exact for closed forms.
  const std::size_t n = A.size();
  Poly phi(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& [e, c] : A[k].terms()) {
      const long deg = std::accumulate(e.begin(), e.end(), 0L);
      Exponents f = e;
      f[k] += 1;
      phi.add_term(f, c / Rational(deg + 1));
    }
  }
  return phi;
}

}  // namespace pencil
