#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pencil/compat.hpp"
#include "pencil/hierarchy.hpp"
#include "pencil/spectral.hpp"

namespace pencil {

/// field[i][m] = u^i at node m.
using Field = std::vector<std::vector<double>>;

struct FieldState {
  Field values;
  double time = 0.0;
};

/// Poly lowered to doubles for pointwise evaluation on the grid.
class CompiledPoly {
 public:
  CompiledPoly() = default;
  explicit CompiledPoly(const Poly& p);

  double operator()(std::span<const double> u) const;
  bool is_zero() const { return terms_.empty(); }

 private:
  struct Term {
    double coeff;
    std::vector<unsigned> exps;
  };
  std::vector<Term> terms_;
};

/// Truncated Fourier series mean + sum_k cos[k-1] cos(kx) + sin[k-1] sin(kx).
struct FourierSeries {
  double mean = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

/// Monitored functionals in order U^1..U^N, H1, H2. values[f][s] is the
/// value after step s; index 0 is the initial state.
struct ConservationSeries {
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> values;
  /// Integral of |density| at t = 0 per functional, the floor of the
  /// drift denominator for functionals that start at zero.
  std::vector<double> scales;

  /// max_s |Q_s - Q_0| / max(|Q_0|, scale).
  double relative_drift(std::size_t f) const;
};

struct IntegrateOptions {
  /// Keep every k-th state in the trajectory; 0 keeps the initial and final
  /// states only.
  std::size_t snapshot_every = 0;
};

struct IntegrationResult {
  std::vector<FieldState> trajectory;
  ConservationSeries series;
  std::vector<std::string> warnings;
};

/// Raised when a field value stops being finite, with the time of the last
/// finite state.
class BlowUpError : public Error {
 public:
  BlowUpError(double time, std::size_t step);
  double time() const { return time_; }
  std::size_t step() const { return step_; }

 private:
  double time_;
  std::size_t step_;
};

/// Canonical pair (P1, P2 = eta d/dx) discretised on a periodic grid.
/// Construction requires data passing check_integrability
/// (Error(NotIntegrable) otherwise).
class SpectralModel {
 public:
  SpectralModel(const CanonicalData& d, std::size_t m);

  std::size_t nvars() const { return n_; }
  const Grid& grid() const { return grid_; }
  const CanonicalData& data() const { return data_; }
  const FlowSystem& flow_system() const { return flow_; }

  /// Relative tolerance on the mean of every antiderivative input.
  double tol_mean() const { return tol_mean_; }
  void set_tol_mean(double tol) { tol_mean_ = tol; }

  FieldState sample(const std::vector<FourierSeries>& components) const;

  /// g xi_x + b u_x xi + sum eps (w u_x) dx_inv(w u_x . xi).
  Field apply_p1(const FieldState& u, const Field& xi) const;
  /// eta dxi/dx
  Field apply_p2(const Field& xi) const;
  /// P1 applied to eta_{jl} dx_inv(flow^l).
  Field recursion_apply(const FieldState& u, const Field& flow) const;
  /// Right-hand side of flow n >= 1: the recursion applied n times to u_x.
  Field flow(const FieldState& u, int n) const;

  /// Pointwise gradient of h at every node, as a covector field.
  Field gradient(const HamiltonianDensity& h, const FieldState& u) const;
  double functional(const Poly& density, const FieldState& u) const;

 private:
  Field derivative(const Field& f) const;
  std::vector<double> point(const FieldState& u, std::size_t m) const;

  std::size_t n_;
  CanonicalData data_;
  FlowSystem flow_;
  Grid grid_;
  double tol_mean_ = 1e-12;

  Matrix<CompiledPoly> metric_;
  Tensor3<CompiledPoly> conn_;
  struct CompiledTail {
    double coefficient;
    Matrix<CompiledPoly> affinor;
  };
  std::vector<CompiledTail> tails_;
  Matrix<CompiledPoly> char_matrix_;
  std::vector<double> eta_lower_;  // row-major
  std::vector<double> eta_upper_;
};

/// Classical RK4 on u_t = flow n, monitoring U^i, H1, H2 after every step.
/// Emits a warning (not an error) when dt exceeds the advisory bound
/// 0.5 * spacing / max speed; the speed estimate uses the characteristic
/// matrix and is only available for n == 1. Throws BlowUpError.
IntegrationResult integrate(const SpectralModel& model, int n, const FieldState& u0, double dt,
                            std::size_t steps, const IntegrateOptions& options = {});

/// {A, B} = integral of dA/du . P dB/du dx with P1 (which == 1) or P2 (which == 2).
double bracket_quadrature(const SpectralModel& model, const HamiltonianDensity& a, const HamiltonianDensity& b,
                          const FieldState& u, int which);

/// Header "step,time,<names...>", one row per recorded step.
void write_conservation_csv(std::ostream& os, const ConservationSeries& s);
/// Header "x,u1,...,uN", one row per node.
void write_field_csv(std::ostream& os, const Grid& grid, const FieldState& u);

}  // namespace pencil
