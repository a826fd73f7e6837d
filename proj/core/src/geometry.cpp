#include "pencil/geometry.hpp"

#include <algorithm>

namespace pencil {

namespace {

struct PointGeometry {
  Matrix<Jet> contra;       // g^{ij}, order 1
  Tensor3<Jet> christoffel;  // Gamma^j_{sk}, order 1
  Tensor4<Rational> curvature;
};

PointGeometry compute_geometry(const HydroBracket& b, std::span<const Rational> point) {
  const std::size_t n = b.nvars();
  if (point.size() != n) throw Error(ErrorCode::DimensionMismatch, "sample point has wrong length");
  const Matrix<Jet> contra2 = eval_jet(b.metric(), point, 2);
  const Matrix<Jet> cov = matrix_inverse_jet(contra2);

  PointGeometry out;
  out.contra = Matrix<Jet>(n, Jet());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.contra(i, j) = contra2(i, j).truncated(1);
  }

  Tensor3<Jet> dcov(n, Jet());  // dcov(m, k, s) = d_s g_{mk}
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t s = 0; s < n; ++s) dcov(m, k, s) = cov(m, k).partial(s);
    }
  }

  const Rational half(1, 2);
  out.christoffel = Tensor3<Jet>(n, Jet());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t k = 0; k < n; ++k) {
        Jet acc(n, 1);
        for (std::size_t m = 0; m < n; ++m) {
          acc += out.contra(j, m) * (dcov(m, k, s) + dcov(m, s, k) - dcov(s, k, m));
        }
        out.christoffel(j, s, k) = acc * half;
      }
    }
  }

  const auto& gam = out.christoffel;
  Tensor4<Rational> riemann(n, Rational());  // (j, s, k, l) = R^j_{skl}
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          Rational r = gam(j, l, s).d(k) - gam(j, k, s).d(l);
          for (std::size_t m = 0; m < n; ++m) {
            r += gam(j, k, m).value() * gam(m, l, s).value() - gam(j, l, m).value() * gam(m, k, s).value();
          }
          riemann(j, s, k, l) = r;
        }
      }
    }
  }
  out.curvature = Tensor4<Rational>(n, Rational());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          Rational r;
          for (std::size_t s = 0; s < n; ++s) r += out.contra(i, s).value() * riemann(j, s, k, l);
          out.curvature(i, j, k, l) = r;
        }
      }
    }
  }
  return out;
}

Rational isotropic_pattern(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  return Rational((i == l && j == k ? 1 : 0) - (j == l && i == k ? 1 : 0));
}

bool metric_is_constant(const HydroBracket& b) {
  for (const Poly& p : b.metric()) {
    if (!p.is_constant()) return false;
  }
  return true;
}

}  // namespace

std::string_view geometry_class_name(GeometryClass c) {
  switch (c) {
    case GeometryClass::Flat: return "flat";
    case GeometryClass::ConstantCurvature: return "constant-curvature";
    case GeometryClass::General: return "general";
  }
  return "?";
}

bool GeometryReport::levi_civita() const {
  return std::all_of(levi_civita_residual.begin(), levi_civita_residual.end(),
                     [](const Rational& r) { return r.is_zero(); });
}

GeometryReport classify_geometry(const HydroBracket& b, std::span<const Rational> point) {
  const std::size_t n = b.nvars();
  PointGeometry geo = compute_geometry(b, point);

  GeometryReport report;
  report.point.assign(point.begin(), point.end());

  report.levi_civita_residual = Tensor3<Rational>(n, Rational());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Rational r = b.conn()(i, j, k).evaluate(point);
        for (std::size_t s = 0; s < n; ++s) r += geo.contra(i, s).value() * geo.christoffel(j, s, k).value();
        report.levi_civita_residual(i, j, k) = r;
      }
    }
  }

  const bool flat = std::all_of(geo.curvature.begin(), geo.curvature.end(),
                                [](const Rational& r) { return r.is_zero(); });
  if (flat) {
    report.classification = GeometryClass::Flat;
  } else {
    // n >= 2 here; R^{01}_{10} carries K in the isotropic pattern.
    const Rational k_candidate = geo.curvature(0, 1, 1, 0);
    bool isotropic = true;
    for (std::size_t i = 0; i < n && isotropic; ++i) {
      for (std::size_t j = 0; j < n && isotropic; ++j) {
        for (std::size_t k = 0; k < n && isotropic; ++k) {
          for (std::size_t l = 0; l < n && isotropic; ++l) {
            isotropic = geo.curvature(i, j, k, l) == k_candidate * isotropic_pattern(i, j, k, l);
          }
        }
      }
    }
    if (isotropic) {
      report.classification = GeometryClass::ConstantCurvature;
      report.curvature_constant = k_candidate;
    } else {
      report.classification = GeometryClass::General;
    }
  }
  report.christoffel = std::move(geo.christoffel);
  report.curvature = std::move(geo.curvature);
  return report;
}

ViolationReport check_ferapontov_conditions(const HydroBracket& b, std::span<const Rational> point) {
  const std::size_t n = b.nvars();
  const auto& g = b.metric();
  const auto& tails = b.tails();
  const Poly zero(n);
  ViolationReport report;

  const PointGeometry geo = compute_geometry(b, point);

  // Metric compatibility of each affinor, in the polynomial form
  // g^{is} w^j_s = g^{js} w^i_s (equivalent when g is nondegenerate).
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Poly r = zero;
        for (std::size_t s = 0; s < n; ++s) r += g(i, s) * w(j, s) - g(j, s) * w(i, s);
        if (!r.is_zero()) report.add(Relation::Peter1, {a, i, j}, std::move(r));
      }
    }
  }

  // Covariant curl: nabla_k w^i_j = nabla_j w^i_k.
  const bool flat_ambient = metric_is_constant(b);
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          if (flat_ambient) {
            // Gamma vanishes identically, so the condition is polynomial.
            Poly r = partial(w(i, j), k) - partial(w(i, k), j);
            if (!r.is_zero()) report.add(Relation::Peter2, {a, i, j, k}, std::move(r));
            continue;
          }
          Rational r = partial(w(i, j), k).evaluate(point) - partial(w(i, k), j).evaluate(point);
          for (std::size_t m = 0; m < n; ++m) {
            r += geo.christoffel(i, k, m).value() * w(m, j).evaluate(point) -
                 geo.christoffel(i, j, m).value() * w(m, k).evaluate(point);
          }
          if (!r.is_zero()) report.add(Relation::Peter2, {a, i, j, k}, Poly::constant(n, r), "pointwise");
        }
      }
    }
  }

  // Gauss relation at the point.
  std::vector<Matrix<Rational>> wv;
  for (const Tail& t : tails) {
    Matrix<Rational> m(n, Rational());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = t.affinor(i, j).evaluate(point);
    }
    wv.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          Rational r = geo.curvature(i, j, k, l);
          for (std::size_t a = 0; a < tails.size(); ++a) {
            const auto& w = wv[a];
            r -= tails[a].coefficient() * (w(i, l) * w(j, k) - w(j, l) * w(i, k));
          }
          if (!r.is_zero()) report.add(Relation::Gauss, {i, j, k, l}, Poly::constant(n, r), "pointwise");
        }
      }
    }
  }

  // Commutativity of the affinor family.
  for (std::size_t a = 0; a < tails.size(); ++a) {
    for (std::size_t c = a + 1; c < tails.size(); ++c) {
      const auto& wa = tails[a].affinor;
      const auto& wc = tails[c].affinor;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          Poly r = zero;
          for (std::size_t s = 0; s < n; ++s) r += wa(i, s) * wc(s, j) - wc(i, s) * wa(s, j);
          if (!r.is_zero()) report.add(Relation::Commute, {a, c, i, j}, std::move(r));
        }
      }
    }
  }
  return report;
}

std::vector<Rational> SamplePointStream::next() {
  std::vector<Rational> p;
  p.reserve(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const long num = static_cast<long>(rng_() % 7) - 3;
    const long den = static_cast<long>(rng_() % 6) + 2;
    p.emplace_back(num, den);
  }
  return p;
}

std::vector<std::vector<Rational>> nondegenerate_points(const HydroBracket& b, std::uint64_t seed,
                                                        std::size_t count) {
  constexpr int kDrawsPerPoint = 50;
  SamplePointStream stream(seed, b.nvars());
  std::vector<std::vector<Rational>> points;
  while (points.size() < count) {
    bool found = false;
    for (int attempt = 0; attempt < kDrawsPerPoint && !found; ++attempt) {
      auto p = stream.next();
      Matrix<Rational> gv(b.nvars(), Rational());
      for (std::size_t i = 0; i < b.nvars(); ++i) {
        for (std::size_t j = 0; j < b.nvars(); ++j) gv(i, j) = b.metric()(i, j).evaluate(p);
      }
      if (!determinant(gv).is_zero()) {
        points.push_back(std::move(p));
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::SingularMetric, "metric degenerate at every sampled point");
  }
  return points;
}

}  // namespace pencil
