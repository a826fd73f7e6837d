#pragma once

#include <optional>
#include <vector>

#include "pencil/bracket.hpp"
#include "pencil/jet.hpp"

namespace pencil {

/// Constant nondegenerate symmetric bracket eta^{ij} d/dx, with its exact
/// inverse eta_{ij}.
class ConstantBracket {
 public:
  /// Throws Error(NonSymmetricEta) or Error(SingularEta).
  explicit ConstantBracket(Matrix<Rational> upper);

  std::size_t nvars() const { return upper_.extent(); }
  const Matrix<Rational>& upper() const { return upper_; }  ///< eta^{ij}
  const Matrix<Rational>& lower() const { return lower_; }  ///< eta_{ij}

  /// The bracket itself as a (local, flat) hydrodynamic bracket.
  HydroBracket as_bracket() const;

  friend bool operator==(const ConstantBracket&, const ConstantBracket&) = default;

 private:
  Matrix<Rational> upper_;
  Matrix<Rational> lower_;
};

/// Potentials of the canonical compatible pair: F^1..F^N and psi^1..psi^L
/// with signs eps_a.
struct CanonicalData {
  ConstantBracket eta;
  std::vector<Poly> F;
  std::vector<Poly> psi;
  std::vector<int> signs;

  std::size_t nvars() const { return eta.nvars(); }
  /// Throws Error(DimensionMismatch) / Error(Schema) on inconsistent data.
  void validate() const;

  friend bool operator==(const CanonicalData&, const CanonicalData&) = default;
};

/// Intermediate potentials recovered from a bracket compatible with eta.
struct PotentialChain {
  std::vector<std::vector<Poly>> phi;  ///< phi[a][i] = (phi^a)^i
  Tensor3<Poly> A;                     ///< A(i, j, k) = A^{ij}_k
  Matrix<Poly> P;
  Matrix<Rational> c;
  Matrix<Poly> R;
  std::vector<Poly> psi;
  std::vector<Poly> F;
  std::vector<int> signs;

  CanonicalData to_canonical(const ConstantBracket& eta) const;
};

struct PencilWeights {
  Rational lambda1{1};
  Rational lambda2{0};
};

/// Bracket compatible with eta read off from the potentials. Performs no
/// validity check; the result is Poisson iff check_integrability passes.
HydroBracket canonical_bracket(const CanonicalData& d);

/// The integrability system on the potentials: Hessian commutation for
/// every pair of potentials, and symmetry of g_can eta Hess(Q) for each Q.
/// Potentials are indexed F^1..F^N first, then psi^1..psi^L.
ViolationReport check_integrability(const CanonicalData& d);

struct CompatibilityReport {
  ViolationReport relations;  ///< relations 1..5
  ViolationReport bw;         ///< derived relation, diagnostic only

  bool compatible() const { return relations.empty(); }
};

/// Compatibility of b with the constant bracket eta. With
/// require_poisson = true, a bracket failing check_poisson throws
/// Error(NotPoisson).
CompatibilityReport check_compatibility(const ConstantBracket& eta, const HydroBracket& b,
                                        bool require_poisson = false);

/// lambda1 * b1 + lambda2 * eta, with the tail weights scaled by |lambda1|.
HydroBracket build_pencil(const HydroBracket& b1, const ConstantBracket& eta, const PencilWeights& w);

/// Recovers phi, A, P, c, R, psi and F from a compatible bracket. Gauge: all
/// integration constants vanish at the origin and c = S/2 with
/// S = g - sum eps phi phi - P - P^T. Throws NotExactError when an
/// integration step meets a non-closed form, Error(NonConstantGauge) when S
/// is not constant and Error(NonSquareCurvature) for a tail weight that is
/// not a rational square.
PotentialChain reconstruct_potentials(const HydroBracket& b, const ConstantBracket& eta);

struct LiouvilleResult {
  bool special = false;
  ViolationReport report;
  std::optional<PotentialChain> chain;
  Matrix<Poly> Phi;                    ///< Phi^{ij} = eta^{is} dF^j/du^s
  std::vector<std::vector<Poly>> phi;  ///< (phi^a)^i = eta^{is} dpsi^a/du^s
};

/// Special Liouville property in the current coordinates with respect to eta.
LiouvilleResult check_special_liouville(const HydroBracket& b, const ConstantBracket& eta);

/// True when the data sits in the reconstruction gauge: no affine part in
/// any psi, no constant term in any F, and eta^{is} dF^j/du^s symmetric at
/// the origin. Data in this gauge round-trips exactly.
bool in_reconstruction_gauge(const CanonicalData& d);

}  // namespace pencil
