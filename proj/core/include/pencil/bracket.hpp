#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pencil/poly.hpp"
#include "pencil/rational.hpp"
#include "pencil/tensor.hpp"

namespace pencil {

/// One nonlocal term  coefficient * w^i_k u^k_x (d/dx)^{-1} w^j_s u^s_x  with
/// coefficient = sign * weight. Brackets built from potentials always carry
/// weight 1; pencils rescale the weight so that sign stays in {+1, -1}.
struct Tail {
  int sign = 1;
  Rational weight{1};
  Matrix<Poly> affinor;  ///< affinor(i, j) = w^i_j

  Rational coefficient() const { return Rational(sign) * weight; }

  friend bool operator==(const Tail&, const Tail&) = default;
};

/// Nonlocal Poisson bracket of hydrodynamic type
///   g^{ij} d/dx + b^{ij}_k u^k_x + sum_a eps_a w_a u_x (d/dx)^{-1} w_a u_x.
/// No tails is the local (Dubrovin-Novikov) case. Degenerate metrics are
/// storable; geometry checks reject them.
class HydroBracket {
 public:
  HydroBracket(Matrix<Poly> metric, Tensor3<Poly> conn, std::vector<Tail> tails = {});

  std::size_t nvars() const { return n_; }
  const Matrix<Poly>& metric() const { return metric_; }
  /// conn()(i, j, k) = b^{ij}_k
  const Tensor3<Poly>& conn() const { return conn_; }
  const std::vector<Tail>& tails() const { return tails_; }

  friend bool operator==(const HydroBracket&, const HydroBracket&) = default;

 private:
  std::size_t n_;
  Matrix<Poly> metric_;
  Tensor3<Poly> conn_;
  std::vector<Tail> tails_;
};

enum class Relation {
  // Poisson property of the nonlocal bracket.
  R01, R02, R03, R04, R05, R06, R07,
  // Compatibility with the constant bracket.
  C1, C2, C3, C4, C5, BW,
  // Ferapontov geometric form.
  Peter1, Peter2, Gauss, Commute,
  // Integrability system on the potentials.
  Ass1, Ass2,
  // Hierarchy identities.
  BihamA, BihamB, TailExact, Involution,
  // Reconstruction and Liouville form.
  Liouville, Reconstruct,
};

std::string_view relation_name(Relation r);

/// A relation instance that failed: which relation, at which (0-based) index
/// tuple, and the residual (a constant polynomial for pointwise checks).
struct Violation {
  Relation relation;
  std::vector<std::size_t> indices;
  Poly residual;
  std::string note;
};

struct ViolationReport {
  std::vector<Violation> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  bool contains(Relation r) const;
  std::size_t count(Relation r) const;
  void add(Relation r, std::vector<std::size_t> indices, Poly residual, std::string note = {});
  void append(const ViolationReport& other);
};

/// Checks the seven relation families on the coefficients of the bracket as
/// exact polynomial identities. Entries come out ordered by relation, then
/// lexicographically by index tuple.
ViolationReport check_poisson(const HydroBracket& b);

/// Constant-curvature bracket with tail K u_x (d/dx)^{-1} u_x, stored as a
/// single tail sign(K) * (c Id) (x) (c Id) with c^2 = |K|. Throws
/// Error(NonSquareCurvature) when |K| is not a rational square.
HydroBracket mf_bracket(Matrix<Poly> metric, Tensor3<Poly> conn, const Rational& curvature);

}  // namespace pencil
