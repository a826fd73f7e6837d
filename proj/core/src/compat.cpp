#include "pencil/compat.hpp"

#include <string>

namespace pencil {

namespace {

Poly integrate_form(std::span<const Poly> form, const std::string& context) {
  try {
    return one_form_potential(form);
  } catch (const NotExactError& e) {
    throw NotExactError(e.k(), e.l(), e.residual(), context);
  }
}

std::vector<Poly> gradient(const Poly& p) {
  std::vector<Poly> out;
  for (std::size_t k = 0; k < p.nvars(); ++k) out.push_back(partial(p, k));
  return out;
}

Matrix<Poly> hessian(const Poly& p) {
  const std::size_t n = p.nvars();
  Matrix<Poly> h(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Poly pi = partial(p, i);
    for (std::size_t j = 0; j < n; ++j) h(i, j) = partial(pi, j);
  }
  return h;
}

/// (eta grad psi)^i = eta^{is} dpsi/du^s
std::vector<Poly> raise(const ConstantBracket& eta, const std::vector<Poly>& covector) {
  const std::size_t n = eta.nvars();
  std::vector<Poly> out(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < n; ++s) out[i] += covector[s] * eta.upper()(i, s);
  }
  return out;
}

}  // namespace

ConstantBracket::ConstantBracket(Matrix<Rational> upper) : upper_(std::move(upper)) {
  const std::size_t n = upper_.extent();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "eta must be at least 1x1");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (upper_(i, j) != upper_(j, i)) throw Error(ErrorCode::NonSymmetricEta, "eta is not symmetric");
    }
  }
  lower_ = inverse(upper_, ErrorCode::SingularEta);
}

HydroBracket ConstantBracket::as_bracket() const {
  const std::size_t n = nvars();
  Matrix<Poly> g(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = Poly::constant(n, upper_(i, j));
  }
  return HydroBracket(std::move(g), Tensor3<Poly>(n, Poly(n)));
}

void CanonicalData::validate() const {
  const std::size_t n = nvars();
  if (F.size() != n) throw Error(ErrorCode::DimensionMismatch, "need exactly N potentials F^i");
  if (psi.size() != signs.size()) throw Error(ErrorCode::DimensionMismatch, "psi and signs differ in length");
  for (const Poly& p : F) {
    if (p.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "F^i over the wrong number of variables");
  }
  for (const Poly& p : psi) {
    if (p.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "psi^a over the wrong number of variables");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorCode::Schema, "signs must be +1 or -1");
  }
}

CanonicalData PotentialChain::to_canonical(const ConstantBracket& eta) const {
  return CanonicalData{eta, F, psi, signs};
}

HydroBracket canonical_bracket(const CanonicalData& d) {
  d.validate();
  const std::size_t n = d.nvars();
  const auto& up = d.eta.upper();
  const Poly zero(n);

  std::vector<std::vector<Poly>> dF;  // dF[j][s] = dF^j/du^s
  for (const Poly& f : d.F) dF.push_back(gradient(f));
  std::vector<std::vector<Poly>> phi;  // phi[a][i] = eta^{is} dpsi^a/du^s
  for (const Poly& p : d.psi) phi.push_back(raise(d.eta, gradient(p)));

  Matrix<Poly> g(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Poly acc = zero;
      for (std::size_t s = 0; s < n; ++s) acc += dF[j][s] * up(i, s) + dF[i][s] * up(j, s);
      for (std::size_t a = 0; a < phi.size(); ++a) acc -= phi[a][i] * phi[a][j] * Rational(d.signs[a]);
      g(i, j) = std::move(acc);
    }
  }

  Tensor3<Poly> b(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Poly acc = zero;
        for (std::size_t s = 0; s < n; ++s) acc += partial(dF[j][s], k) * up(i, s);
        for (std::size_t a = 0; a < phi.size(); ++a) {
          acc -= partial(phi[a][i], k) * phi[a][j] * Rational(d.signs[a]);
        }
        b(i, j, k) = std::move(acc);
      }
    }
  }

  std::vector<Tail> tails;
  for (std::size_t a = 0; a < phi.size(); ++a) {
    Tail t;
    t.sign = d.signs[a];
    t.affinor = Matrix<Poly>(n, zero);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) t.affinor(i, k) = partial(phi[a][i], k);
    }
    tails.push_back(std::move(t));
  }
  return HydroBracket(std::move(g), std::move(b), std::move(tails));
}

ViolationReport check_integrability(const CanonicalData& d) {
  d.validate();
  const std::size_t n = d.nvars();
  const auto& up = d.eta.upper();
  const Poly zero(n);

  std::vector<Matrix<Poly>> hess;
  for (const Poly& f : d.F) hess.push_back(hessian(f));
  for (const Poly& p : d.psi) hess.push_back(hessian(p));

  // H eta^{-1}-contracted products: prod(a, b)(i, j) = H_a(i, s) eta^{sp} H_b(p, j).
  auto contract = [&](const Matrix<Poly>& ha, const Matrix<Poly>& hb, std::size_t i, std::size_t j) {
    Poly acc = zero;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t p = 0; p < n; ++p) {
        if (up(s, p).is_zero()) continue;
        acc += ha(i, s) * hb(p, j) * up(s, p);
      }
    }
    return acc;
  };

  ViolationReport report;
  for (std::size_t a = 0; a < hess.size(); ++a) {
    for (std::size_t c = a + 1; c < hess.size(); ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          Poly r = contract(hess[a], hess[c], i, j) - contract(hess[c], hess[a], i, j);
          if (!r.is_zero()) report.add(Relation::Ass1, {a, c, i, j}, std::move(r));
        }
      }
    }
  }

  const HydroBracket can = canonical_bracket(d);
  const auto& g = can.metric();
  for (std::size_t q = 0; q < hess.size(); ++q) {
    // t(i, j) = g^{is} eta^{jr} H(r, s)
    Matrix<Poly> t(n, zero);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < n; ++s) {
          for (std::size_t r = 0; r < n; ++r) {
            if (up(j, r).is_zero()) continue;
            t(i, j) += g(i, s) * hess[q](r, s) * up(j, r);
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Poly r = t(i, j) - t(j, i);
        if (!r.is_zero()) report.add(Relation::Ass2, {q, i, j}, std::move(r));
      }
    }
  }
  return report;
}

CompatibilityReport check_compatibility(const ConstantBracket& eta, const HydroBracket& b,
                                        bool require_poisson) {
  const std::size_t n = b.nvars();
  if (eta.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "eta and bracket dimensions differ");
  if (require_poisson) {
    const ViolationReport poisson = check_poisson(b);
    if (!poisson.empty()) {
      throw Error(ErrorCode::NotPoisson, "bracket fails " + std::to_string(poisson.size()) +
                                             " Poisson relations (first: " +
                                             std::string(relation_name(poisson.entries.front().relation)) + ")");
    }
  }
  const auto& up = eta.upper();
  const auto& conn = b.conn();
  const auto& tails = b.tails();
  const Poly zero(n);
  CompatibilityReport out;
  auto& rep = out.relations;

  // 1: eta^{is} b^{jk}_s symmetric in (i, j).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Poly r = zero;
        for (std::size_t s = 0; s < n; ++s) r += conn(j, k, s) * up(i, s) - conn(i, k, s) * up(j, s);
        if (!r.is_zero()) rep.add(Relation::C1, {i, j, k}, std::move(r));
      }
    }
  }
  // 2: eta^{is} w^j_s symmetric in (i, j).
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Poly r = zero;
        for (std::size_t s = 0; s < n; ++s) r += w(j, s) * up(i, s) - w(i, s) * up(j, s);
        if (!r.is_zero()) rep.add(Relation::C2, {a, i, j}, std::move(r));
      }
    }
  }
  // 3: dw^i_j/du^k = dw^i_k/du^j.
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          Poly r = partial(w(i, j), k) - partial(w(i, k), j);
          if (!r.is_zero()) rep.add(Relation::C3, {a, i, j, k}, std::move(r));
        }
      }
    }
  }
  // 4: eta^{jr} b^{ik}_s w^s_r symmetric in (i, j).
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    auto side = [&](std::size_t i, std::size_t j, std::size_t k) {
      Poly acc = zero;
      for (std::size_t r = 0; r < n; ++r) {
        if (up(j, r).is_zero()) continue;
        for (std::size_t s = 0; s < n; ++s) acc += conn(i, k, s) * w(s, r) * up(j, r);
      }
      return acc;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          Poly r = side(i, j, k) - side(j, i, k);
          if (!r.is_zero()) rep.add(Relation::C4, {a, i, j, k}, std::move(r));
        }
      }
    }
  }
  // 5: curl of b^{jk}_. against the tails.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
          Poly res = partial(conn(j, k, r), s) - partial(conn(j, k, s), r);
          for (const Tail& t : tails) {
            const auto& w = t.affinor;
            res -= (w(j, s) * w(k, r) - w(j, r) * w(k, s)) * t.coefficient();
          }
          if (!res.is_zero()) rep.add(Relation::C5, {j, k, r, s}, std::move(res));
        }
      }
    }
  }
  // bw: b^{rk}_s w^j_r = b^{jk}_r w^r_s.
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t s = 0; s < n; ++s) {
          Poly res = zero;
          for (std::size_t r = 0; r < n; ++r) res += conn(r, k, s) * w(j, r) - conn(j, k, r) * w(r, s);
          if (!res.is_zero()) out.bw.add(Relation::BW, {a, j, k, s}, std::move(res));
        }
      }
    }
  }
  return out;
}

HydroBracket build_pencil(const HydroBracket& b1, const ConstantBracket& eta, const PencilWeights& w) {
  const std::size_t n = b1.nvars();
  if (eta.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "eta and bracket dimensions differ");
  Matrix<Poly> g(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g(i, j) = b1.metric()(i, j) * w.lambda1 + Poly::constant(n, w.lambda2 * eta.upper()(i, j));
    }
  }
  Tensor3<Poly> conn = b1.conn();
  for (Poly& p : conn) p *= w.lambda1;
  std::vector<Tail> tails;
  if (!w.lambda1.is_zero()) {
    for (const Tail& t : b1.tails()) {
      Tail scaled = t;
      scaled.sign = t.sign * w.lambda1.sign();
      scaled.weight = t.weight * w.lambda1.abs();
      tails.push_back(std::move(scaled));
    }
  }
  return HydroBracket(std::move(g), std::move(conn), std::move(tails));
}

PotentialChain reconstruct_potentials(const HydroBracket& b, const ConstantBracket& eta) {
  const std::size_t n = b.nvars();
  if (eta.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "eta and bracket dimensions differ");
  const auto& up = eta.upper();
  const auto& low = eta.lower();
  const Poly zero(n);
  PotentialChain chain;

  // phi^a from w^a = d phi^a; a weight c^2 is absorbed as phi -> c phi.
  for (std::size_t a = 0; a < b.tails().size(); ++a) {
    const Tail& t = b.tails()[a];
    const auto scale = t.weight.exact_sqrt();
    if (!scale) {
      throw Error(ErrorCode::NonSquareCurvature,
                  "tail " + std::to_string(a + 1) + " weight " + t.weight.str() + " is not a rational square");
    }
    std::vector<Poly> phi_a;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k) row.push_back(t.affinor(i, k) * *scale);
      phi_a.push_back(integrate_form(row, "phi^" + std::to_string(a + 1) + " component " + std::to_string(i + 1)));
    }
    chain.phi.push_back(std::move(phi_a));
    chain.signs.push_back(t.sign);
  }

  // psi^a from eta_{rs} phi^s = d psi / du^r.
  for (std::size_t a = 0; a < chain.phi.size(); ++a) {
    std::vector<Poly> form(n, zero);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t s = 0; s < n; ++s) form[r] += chain.phi[a][s] * low(r, s);
    }
    chain.psi.push_back(integrate_form(form, "psi^" + std::to_string(a + 1)));
  }

  // A^{ij}_k = b^{ij}_k - sum eps phi^i d_k phi^j, then P with dP = A.
  chain.A = Tensor3<Poly>(n, zero);
  chain.P = Matrix<Poly>(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Poly> form;
      for (std::size_t k = 0; k < n; ++k) {
        Poly acc = b.conn()(i, j, k);
        for (std::size_t a = 0; a < chain.phi.size(); ++a) {
          acc -= chain.phi[a][i] * partial(chain.phi[a][j], k) * Rational(chain.signs[a]);
        }
        chain.A(i, j, k) = acc;
        form.push_back(std::move(acc));
      }
      chain.P(i, j) = integrate_form(form, "P^{" + std::to_string(i + 1) + std::to_string(j + 1) + "}");
    }
  }

  // g = R + R^T + sum eps phi phi with R = P + c.
  chain.c = Matrix<Rational>(n, Rational());
  chain.R = Matrix<Poly>(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Poly s = b.metric()(i, j) - chain.P(i, j) - chain.P(j, i);
      for (std::size_t a = 0; a < chain.phi.size(); ++a) {
        s -= chain.phi[a][i] * chain.phi[a][j] * Rational(chain.signs[a]);
      }
      if (!s.is_constant()) {
        throw Error(ErrorCode::NonConstantGauge, "g - sum eps phi phi - P - P^T is not constant at (" +
                                                     std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                     "): " + s.str());
      }
      chain.c(i, j) = s.constant_term() * Rational(1, 2);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) chain.R(i, j) = chain.P(i, j) + Poly::constant(n, chain.c(i, j));
  }

  // dF^k/du^l = eta_{lj} R^{jk} + eta^{kp} sum eps dpsi/du^l dpsi/du^p.
  std::vector<std::vector<Poly>> dpsi;
  for (const Poly& p : chain.psi) dpsi.push_back(gradient(p));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Poly> form(n, zero);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t j = 0; j < n; ++j) form[l] += chain.R(j, k) * low(l, j);
      for (std::size_t a = 0; a < dpsi.size(); ++a) {
        for (std::size_t p = 0; p < n; ++p) {
          if (up(k, p).is_zero()) continue;
          form[l] += dpsi[a][l] * dpsi[a][p] * (up(k, p) * Rational(chain.signs[a]));
        }
      }
    }
    chain.F.push_back(integrate_form(form, "F^" + std::to_string(k + 1)));
  }
  return chain;
}

LiouvilleResult check_special_liouville(const HydroBracket& b, const ConstantBracket& eta) {
  LiouvilleResult out;
  const CompatibilityReport compat = check_compatibility(eta, b);
  if (!compat.compatible()) {
    out.report = compat.relations;
    return out;
  }
  const std::size_t n = b.nvars();
  const Poly zero(n);
  try {
    out.chain = reconstruct_potentials(b, eta);
  } catch (const NotExactError& e) {
    out.report.add(Relation::Reconstruct, {e.k(), e.l()}, e.residual(), e.what());
    return out;
  } catch (const Error& e) {
    out.report.add(Relation::Reconstruct, {}, zero, e.what());
    return out;
  }
  const PotentialChain& chain = *out.chain;

  out.Phi = Matrix<Poly>(n, zero);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < n; ++s) out.Phi(i, j) += partial(chain.F[j], s) * eta.upper()(i, s);
    }
  }
  for (const Poly& p : chain.psi) out.phi.push_back(raise(eta, gradient(p)));

  // The Liouville form built from (Phi, phi) must reproduce the bracket.
  const auto& sg = chain.signs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Poly r = b.metric()(i, j) - out.Phi(i, j) - out.Phi(j, i);
      for (std::size_t a = 0; a < out.phi.size(); ++a) r += out.phi[a][i] * out.phi[a][j] * Rational(sg[a]);
      if (!r.is_zero()) out.report.add(Relation::Liouville, {i, j}, std::move(r), "metric");
      for (std::size_t k = 0; k < n; ++k) {
        Poly rb = b.conn()(i, j, k) - partial(out.Phi(i, j), k);
        for (std::size_t a = 0; a < out.phi.size(); ++a) {
          rb += partial(out.phi[a][i], k) * out.phi[a][j] * Rational(sg[a]);
        }
        if (!rb.is_zero()) out.report.add(Relation::Liouville, {i, j, k}, std::move(rb), "connection");
      }
    }
  }
  for (std::size_t a = 0; a < out.phi.size(); ++a) {
    const Tail& t = b.tails()[a];
    const Rational scale = *t.weight.exact_sqrt();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        Poly r = t.affinor(i, k) * scale - partial(out.phi[a][i], k);
        if (!r.is_zero()) out.report.add(Relation::Liouville, {a, i, k}, std::move(r), "affinor");
      }
    }
  }
  out.special = out.report.empty();
  return out;
}

bool in_reconstruction_gauge(const CanonicalData& d) {
  d.validate();
  const std::size_t n = d.nvars();
  for (const Poly& p : d.psi) {
    for (const auto& [e, c] : p.terms()) {
      unsigned deg = 0;
      for (unsigned x : e) deg += x;
      if (deg <= 1) return false;
    }
  }
  for (const Poly& f : d.F) {
    if (!f.constant_term().is_zero()) return false;
  }
  const std::vector<Rational> origin(n, Rational());
  Matrix<Rational> r0(n, Rational());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < n; ++s) r0(i, j) += d.eta.upper()(i, s) * partial(d.F[j], s).evaluate(origin);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (r0(i, j) != r0(j, i)) return false;
    }
  }
  return true;
}

}  // namespace pencil
