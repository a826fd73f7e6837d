#pragma once

#include <vector>

#include "pencil/bracket.hpp"
#include "pencil/compat.hpp"

namespace pencil {

/// First nontrivial flow u^i_t = (V^i)_x of the hierarchy and its two
/// Hamiltonian densities. All polynomials are over the N field variables.
struct FlowSystem {
  std::vector<Poly> flux;   ///< V^i
  Matrix<Poly> char_matrix;  ///< V^i_j = dV^i/du^j
  Poly h1_density;           ///< 1/2 eta_{jl} u^j u^l
  Poly h2_density;           ///< eta_{jk} F^k u^j - 1/2 sum eps (psi)^2
};

/// Density h(u) of a hydrodynamic-type functional (no derivative dependence).
struct HamiltonianDensity {
  Poly density;
};

/// delta H / delta u^i, which for h = h(u) is the gradient.
std::vector<Poly> variational_derivative(const HamiltonianDensity& h);

/// V^i = F^i + eta^{is} eta_{jr} dF^j/du^s u^r - eta^{is} sum eps dpsi/du^s psi.
/// Throws Error(NotIntegrable) when check_integrability reports violations.
FlowSystem flow1(const CanonicalData& d);

/// (a) eta^{ij} dh2/du^j == V^i and (b) P1(eta u) == (V^i)_x on the jet
/// space, with each tail resolved as psi_l u^l - psi (zero-constant gauge).
/// Residuals of (b) are polynomials in (u, u_x).
ViolationReport verify_bihamiltonian(const CanonicalData& d, const FlowSystem& f);

/// P1 applied to a covector field xi_j(u), as polynomials on the jet space
/// (u, u_x). Each tail integrand w^j_s u^s_x xi_j is integrated with
/// one_form_potential (zero at the origin); a non-closed integrand is
/// reported as a TailExact violation and its tail is left out.
std::vector<Poly> apply_p1_symbolic(const HydroBracket& b, const std::vector<Poly>& xi,
                                    ViolationReport* report = nullptr);

/// Integrand xi_A . P1 xi_B of {A, B}_1 on the jet space. Linear in u_x for
/// hydrodynamic densities.
Poly bracket_integrand(const HydroBracket& b, const HamiltonianDensity& a, const HamiltonianDensity& c,
                       ViolationReport* report = nullptr);

/// Pairwise brackets {A, B} (A before or equal to B in the list) with
/// respect to b; each integrand must be a total x-derivative.
ViolationReport check_involution(const HydroBracket& b, const std::vector<HamiltonianDensity>& functionals);

/// {U^i, U^j}_1 and {U^i, H1}_1 for all pairs, including i == j. Each
/// integrand must be a total x-derivative; violations carry the closedness
/// defect of its u_x coefficients. Functional indices: 0..N-1 are U^1..U^N,
/// N is H1. Throws Error(NotIntegrable) on data failing check_integrability.
ViolationReport casimir_momentum_involution(const CanonicalData& d);

}  // namespace pencil
