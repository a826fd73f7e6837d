#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pencil/bracket.hpp"
#include "pencil/jet.hpp"

namespace pencil {

// Curvature convention. With Gamma^j_{sk} the Levi-Civita connection of the
// covariant metric g_{ij} = (g^{ij})^{-1},
//
//   R^j_{skl}  = d_k Gamma^j_{ls} - d_l Gamma^j_{ks}
//                + Gamma^j_{km} Gamma^m_{ls} - Gamma^j_{lm} Gamma^m_{ks}
//   R^{ij}_{kl} = g^{is} R^j_{skl}
//
// For the unit sphere chart g^{ij} = delta^{ij} - u^i u^j this gives
// R^{ij}_{kl} = delta^i_l delta^j_k - delta^j_l delta^i_k, i.e. the Gauss
// relation with one tail w = Id, eps = +1. A metric of constant curvature K
// has R^{ij}_{kl} = K (delta^i_l delta^j_k - delta^j_l delta^i_k).

enum class GeometryClass { Flat, ConstantCurvature, General };

std::string_view geometry_class_name(GeometryClass c);

struct GeometryReport {
  std::vector<Rational> point;
  Tensor3<Jet> christoffel;              ///< (j, s, k) = Gamma^j_{sk}, first-order jets
  Tensor4<Rational> curvature;           ///< (i, j, k, l) = R^{ij}_{kl}
  GeometryClass classification = GeometryClass::General;
  Rational curvature_constant;           ///< K when ConstantCurvature, 0 when Flat
  Tensor3<Rational> levi_civita_residual;  ///< b^{ij}_k + g^{is} Gamma^j_{sk}

  bool levi_civita() const;
};

/// Pointwise Christoffel symbols, curvature and classification. The class is
/// decided at the single point: ConstantCurvature means the curvature tensor
/// has the isotropic form there. Throws Error(SingularMetric).
GeometryReport classify_geometry(const HydroBracket& b, std::span<const Rational> point);

/// Metric/affinor compatibility and affinor commutativity symbolically, the
/// covariant-curl condition and the Gauss relation with exact jets at point.
/// Throws Error(SingularMetric).
ViolationReport check_ferapontov_conditions(const HydroBracket& b, std::span<const Rational> point);

/// Deterministic stream of small rational points p/q with |p| <= 3, 2 <= q <= 7.
class SamplePointStream {
 public:
  SamplePointStream(std::uint64_t seed, std::size_t nvars) : rng_(seed), n_(nvars) {}
  std::vector<Rational> next();

 private:
  std::mt19937_64 rng_;
  std::size_t n_;
};

/// Draws from the stream until `count` points with nondegenerate metric are
/// found (at most 50 draws per point; throws Error(SingularMetric) otherwise).
std::vector<std::vector<Rational>> nondegenerate_points(const HydroBracket& b, std::uint64_t seed,
                                                        std::size_t count);

}  // namespace pencil
