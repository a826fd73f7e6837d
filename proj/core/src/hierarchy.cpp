#include "pencil/hierarchy.hpp"

#include <string>

namespace pencil {

namespace {

void require_integrable(const CanonicalData& d) {
  const ViolationReport r = check_integrability(d);
  if (!r.empty()) {
    throw Error(ErrorCode::NotIntegrable, "potentials violate " + std::to_string(r.size()) +
                                              " integrability relations (first: " +
                                              std::string(relation_name(r.entries.front().relation)) + ")");
  }
}

std::vector<Poly> gradient(const Poly& p) {
  std::vector<Poly> out;
  for (std::size_t k = 0; k < p.nvars(); ++k) out.push_back(partial(p, k));
  return out;
}

Poly ux(std::size_t n, std::size_t k) { return Poly::variable(2 * n, n + k); }

/// w^i_k u^k_x on the jet space.
Poly contract_ux(const Matrix<Poly>& w, std::size_t i) {
  const std::size_t n = w.extent();
  Poly acc(2 * n);
  for (std::size_t k = 0; k < n; ++k) acc += w(i, k).extend(2 * n) * ux(n, k);
  return acc;
}

/// Coefficients e_s(u) of a jet-space polynomial sum_s e_s u^s_x. Terms that
/// are not of degree exactly one in u_x go to `rest`.
std::vector<Poly> split_linear_ux(const Poly& p, std::size_t n, Poly& rest) {
  std::vector<Poly> e(n, Poly(n));
  rest = Poly(2 * n);
  for (const auto& [exps, c] : p.terms()) {
    unsigned deg = 0;
    std::size_t which = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (exps[n + s] > 0) which = s;
      deg += exps[n + s];
    }
    if (deg != 1) {
      rest.add_term(exps, c);
      continue;
    }
    e[which].add_term(Exponents(exps.begin(), exps.begin() + static_cast<long>(n)), c);
  }
  return e;
}

/// g^{ij} D_x xi_j + b^{ij}_k u^k_x xi_j, the local part of P1 xi.
std::vector<Poly> local_part(const HydroBracket& b, const std::vector<Poly>& xi) {
  const std::size_t n = b.nvars();
  std::vector<Poly> dxi;
  for (const Poly& x : xi) dxi.push_back(total_x_derivative(x));
  std::vector<Poly> out(n, Poly(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i] += b.metric()(i, j).extend(2 * n) * dxi[j];
      Poly bx(2 * n);
      for (std::size_t k = 0; k < n; ++k) bx += b.conn()(i, j, k).extend(2 * n) * ux(n, k);
      out[i] += bx * xi[j].extend(2 * n);
    }
  }
  return out;
}

/// Coefficients of the tail integrand w^j_s u^s_x xi_j.
std::vector<Poly> tail_integrand(const Tail& t, const std::vector<Poly>& xi) {
  const std::size_t n = xi.size();
  std::vector<Poly> e(n, Poly(n));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t j = 0; j < n; ++j) e[s] += t.affinor(j, s) * xi[j];
  }
  return e;
}

void check_covector(const HydroBracket& b, const std::vector<Poly>& xi) {
  if (xi.size() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "covector has wrong length");
  for (const Poly& p : xi) {
    if (p.nvars() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "covector entry in wrong ring");
  }
}

}  // namespace

std::vector<Poly> variational_derivative(const HamiltonianDensity& h) { return gradient(h.density); }

FlowSystem flow1(const CanonicalData& d) {
  require_integrable(d);
  const std::size_t n = d.nvars();
  const auto& up = d.eta.upper();
  const auto& lo = d.eta.lower();

  FlowSystem f;
  f.flux.assign(n, Poly(n));
  // eta_{jr} u^r, reused for the flux and both densities.
  std::vector<Poly> lowered(n, Poly(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < n; ++r) lowered[j] += Poly::variable(n, r) * lo(j, r);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Poly v = d.F[i];
    for (std::size_t s = 0; s < n; ++s) {
      if (up(i, s).is_zero()) continue;
      Poly inner(n);
      for (std::size_t j = 0; j < n; ++j) inner += partial(d.F[j], s) * lowered[j];
      for (std::size_t a = 0; a < d.psi.size(); ++a) {
        inner -= partial(d.psi[a], s) * d.psi[a] * Rational(d.signs[a]);
      }
      v += inner * up(i, s);
    }
    f.flux[i] = std::move(v);
  }

  f.char_matrix = Matrix<Poly>(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) f.char_matrix(i, j) = partial(f.flux[i], j);
  }

  f.h1_density = Poly(n);
  f.h2_density = Poly(n);
  for (std::size_t j = 0; j < n; ++j) {
    f.h1_density += Poly::variable(n, j) * lowered[j];
    f.h2_density += d.F[j] * lowered[j];
  }
  f.h1_density *= Rational(1, 2);
  for (std::size_t a = 0; a < d.psi.size(); ++a) {
    f.h2_density -= d.psi[a] * d.psi[a] * Rational(d.signs[a], 2);
  }
  return f;
}

std::vector<Poly> apply_p1_symbolic(const HydroBracket& b, const std::vector<Poly>& xi,
                                    ViolationReport* report) {
  check_covector(b, xi);
  const std::size_t n = b.nvars();
  std::vector<Poly> out = local_part(b, xi);
  for (std::size_t a = 0; a < b.tails().size(); ++a) {
    const Tail& t = b.tails()[a];
    const std::vector<Poly> e = tail_integrand(t, xi);
    const auto defects = closedness_defects(e);
    if (!defects.empty()) {
      if (report) {
        for (const auto& def : defects) {
          report->add(Relation::TailExact, {a, def.k, def.l}, def.residual, "tail integrand is not exact");
        }
      }
      continue;
    }
    const Poly theta = one_form_potential(e).extend(2 * n);
    for (std::size_t i = 0; i < n; ++i) out[i] += contract_ux(t.affinor, i) * theta * t.coefficient();
  }
  return out;
}

ViolationReport verify_bihamiltonian(const CanonicalData& d, const FlowSystem& f) {
  d.validate();
  const std::size_t n = d.nvars();
  if (f.flux.size() != n) throw Error(ErrorCode::DimensionMismatch, "flow has wrong number of components");
  const auto& up = d.eta.upper();
  const auto& lo = d.eta.lower();
  ViolationReport report;

  // (a) eta^{ij} dh2/du^j == V^i
  const std::vector<Poly> grad_h2 = gradient(f.h2_density);
  for (std::size_t i = 0; i < n; ++i) {
    Poly r = -f.flux[i];
    for (std::size_t j = 0; j < n; ++j) r += grad_h2[j] * up(i, j);
    if (!r.is_zero()) report.add(Relation::BihamA, {i}, std::move(r));
  }

  // (b) P1(eta u) == D_x V, tails resolved by their closed-form antiderivative.
  const HydroBracket p1 = canonical_bracket(d);
  std::vector<Poly> xi(n, Poly(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < n; ++l) xi[j] += Poly::variable(n, l) * lo(j, l);
  }
  std::vector<Poly> image = local_part(p1, xi);
  for (std::size_t a = 0; a < d.psi.size(); ++a) {
    const Tail& t = p1.tails()[a];
    const Poly& psi = d.psi[a];
    Poly theta = -psi;
    for (std::size_t l = 0; l < n; ++l) theta += partial(psi, l) * Poly::variable(n, l);

    // D_x theta must reproduce the integrand w^j_s u^s_x xi_j.
    const std::vector<Poly> e = tail_integrand(t, xi);
    Poly integrand(2 * n);
    for (std::size_t s = 0; s < n; ++s) integrand += e[s].extend(2 * n) * ux(n, s);
    Poly defect = total_x_derivative(theta) - integrand;
    if (!defect.is_zero()) report.add(Relation::TailExact, {a}, std::move(defect), "closed-form antiderivative");

    const Poly theta_jet = theta.extend(2 * n);
    for (std::size_t i = 0; i < n; ++i) image[i] += contract_ux(t.affinor, i) * theta_jet * t.coefficient();
  }
  for (std::size_t i = 0; i < n; ++i) {
    Poly r = image[i] - total_x_derivative(f.flux[i]);
    if (!r.is_zero()) report.add(Relation::BihamB, {i}, std::move(r));
  }
  return report;
}

Poly bracket_integrand(const HydroBracket& b, const HamiltonianDensity& a, const HamiltonianDensity& c,
                       ViolationReport* report) {
  const std::size_t n = b.nvars();
  const std::vector<Poly> xa = variational_derivative(a);
  const std::vector<Poly> image = apply_p1_symbolic(b, variational_derivative(c), report);
  Poly out(2 * n);
  for (std::size_t i = 0; i < n; ++i) out += xa[i].extend(2 * n) * image[i];
  return out;
}

ViolationReport check_involution(const HydroBracket& b, const std::vector<HamiltonianDensity>& functionals) {
  const std::size_t n = b.nvars();
  ViolationReport report;
  for (std::size_t a = 0; a < functionals.size(); ++a) {
    for (std::size_t c = a; c < functionals.size(); ++c) {
      ViolationReport tails;
      const Poly integrand = bracket_integrand(b, functionals[a], functionals[c], &tails);
      for (Violation v : tails.entries) {
        v.indices.insert(v.indices.begin(), {a, c});
        report.entries.push_back(std::move(v));
      }
      Poly rest;
      const std::vector<Poly> e = split_linear_ux(integrand, n, rest);
      if (!rest.is_zero()) report.add(Relation::Involution, {a, c}, rest, "integrand not linear in u_x");
      for (const auto& def : closedness_defects(e)) {
        report.add(Relation::Involution, {a, c}, def.residual.extend(2 * n), "integrand is not a total derivative");
      }
    }
  }
  return report;
}

ViolationReport casimir_momentum_involution(const CanonicalData& d) {
  require_integrable(d);
  const std::size_t n = d.nvars();
  std::vector<HamiltonianDensity> functionals;
  for (std::size_t i = 0; i < n; ++i) functionals.push_back({Poly::variable(n, i)});
  functionals.push_back({flow1(d).h1_density});
  return check_involution(canonical_bracket(d), functionals);
}

}  // namespace pencil
