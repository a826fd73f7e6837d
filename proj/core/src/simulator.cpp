#include "pencil/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pencil {

CompiledPoly::CompiledPoly(const Poly& p) {
  for (const auto& [exps, c] : p.terms()) terms_.push_back({c.to_double(), exps});
}

double CompiledPoly::operator()(std::span<const double> u) const {
  double acc = 0.0;
  for (const Term& t : terms_) {
    double v = t.coeff;
    for (std::size_t k = 0; k < t.exps.size(); ++k) {
      for (unsigned e = 0; e < t.exps[k]; ++e) v *= u[k];
    }
    acc += v;
  }
  return acc;
}

double ConservationSeries::relative_drift(std::size_t f) const {
  const auto& v = values.at(f);
  const double denom = std::max(std::abs(v.front()), scales.at(f));
  double worst = 0.0;
  for (double q : v) worst = std::max(worst, std::abs(q - v.front()));
  return denom > 0.0 ? worst / denom : worst;
}

BlowUpError::BlowUpError(double time, std::size_t step)
    : Error(ErrorCode::NonFinite, [&] {
        std::ostringstream os;
        os << "field left the finite range after t = " << time << " (step " << step << ")";
        return os.str();
      }()),
      time_(time),
      step_(step) {}

namespace {

template <class T>
Matrix<CompiledPoly> compile(const Matrix<Poly>& m) {
  Matrix<CompiledPoly> out(m.extent(), CompiledPoly());
  for (std::size_t i = 0; i < m.extent(); ++i) {
    for (std::size_t j = 0; j < m.extent(); ++j) out(i, j) = CompiledPoly(m(i, j));
  }
  return out;
}

Field zeros(std::size_t n, std::size_t m) { return Field(n, std::vector<double>(m, 0.0)); }

void check_field(const Field& f, std::size_t n, std::size_t m, const char* what) {
  if (f.size() != n) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has wrong component count");
  for (const auto& row : f) {
    if (row.size() != m) throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has wrong node count");
  }
}

bool all_finite(const Field& f) {
  for (const auto& row : f) {
    for (double v : row) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

// a + s * b
Field axpy(const Field& a, double s, const Field& b) {
  Field out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t m = 0; m < a[i].size(); ++m) out[i][m] += s * b[i][m];
  }
  return out;
}

}  // namespace

SpectralModel::SpectralModel(const CanonicalData& d, std::size_t m)
    : n_(d.nvars()), data_(d), flow_(flow1(d)), grid_(m) {
  const HydroBracket p1 = canonical_bracket(d);
  metric_ = compile<Poly>(p1.metric());
  conn_ = Tensor3<CompiledPoly>(n_, CompiledPoly());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = 0; k < n_; ++k) conn_(i, j, k) = CompiledPoly(p1.conn()(i, j, k));
    }
  }
  for (const Tail& t : p1.tails()) tails_.push_back({t.coefficient().to_double(), compile<Poly>(t.affinor)});
  char_matrix_ = compile<Poly>(flow_.char_matrix);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      eta_lower_.push_back(d.eta.lower()(i, j).to_double());
      eta_upper_.push_back(d.eta.upper()(i, j).to_double());
    }
  }
}

FieldState SpectralModel::sample(const std::vector<FourierSeries>& components) const {
  if (components.size() != n_) throw Error(ErrorCode::DimensionMismatch, "one Fourier series per component");
  FieldState u{zeros(n_, grid_.size()), 0.0};
  const auto& x = grid_.nodes();
  for (std::size_t i = 0; i < n_; ++i) {
    const FourierSeries& s = components[i];
    for (std::size_t m = 0; m < x.size(); ++m) {
      double v = s.mean;
      for (std::size_t k = 0; k < s.cos.size(); ++k) v += s.cos[k] * std::cos(static_cast<double>(k + 1) * x[m]);
      for (std::size_t k = 0; k < s.sin.size(); ++k) v += s.sin[k] * std::sin(static_cast<double>(k + 1) * x[m]);
      u.values[i][m] = v;
    }
  }
  return u;
}

Field SpectralModel::derivative(const Field& f) const {
  Field out;
  out.reserve(f.size());
  for (const auto& row : f) out.push_back(grid_.dx(row));
  return out;
}

std::vector<double> SpectralModel::point(const FieldState& u, std::size_t m) const {
  std::vector<double> p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = u.values[i][m];
  return p;
}

Field SpectralModel::apply_p1(const FieldState& u, const Field& xi) const {
  const std::size_t mm = grid_.size();
  check_field(u.values, n_, mm, "state");
  check_field(xi, n_, mm, "covector");
  const Field ux = derivative(u.values);
  const Field xix = derivative(xi);
  Field out = zeros(n_, mm);

  // Pointwise affinor contractions wu[a][i][m] = w^i_k u^k_x.
  std::vector<Field> wu(tails_.size(), zeros(n_, mm));
  std::vector<std::vector<double>> integrand(tails_.size(), std::vector<double>(mm, 0.0));

  for (std::size_t m = 0; m < mm; ++m) {
    const std::vector<double> p = point(u, m);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        acc += metric_(i, j)(p) * xix[j][m];
        double bx = 0.0;
        for (std::size_t k = 0; k < n_; ++k) bx += conn_(i, j, k)(p) * ux[k][m];
        acc += bx * xi[j][m];
      }
      out[i][m] = acc;
    }
    for (std::size_t a = 0; a < tails_.size(); ++a) {
      for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_; ++k) acc += tails_[a].affinor(i, k)(p) * ux[k][m];
        wu[a][i][m] = acc;
        integrand[a][m] += acc * xi[i][m];
      }
    }
  }
  for (std::size_t a = 0; a < tails_.size(); ++a) {
    const std::vector<double> theta = grid_.dx_inv(integrand[a], tol_mean_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t m = 0; m < mm; ++m) out[i][m] += tails_[a].coefficient * wu[a][i][m] * theta[m];
    }
  }
  return out;
}

Field SpectralModel::apply_p2(const Field& xi) const {
  check_field(xi, n_, grid_.size(), "covector");
  const Field d = derivative(xi);
  Field out = zeros(n_, grid_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double e = eta_upper_[i * n_ + j];
      if (e == 0.0) continue;
      for (std::size_t m = 0; m < grid_.size(); ++m) out[i][m] += e * d[j][m];
    }
  }
  return out;
}

Field SpectralModel::recursion_apply(const FieldState& u, const Field& flow) const {
  check_field(flow, n_, grid_.size(), "flow");
  Field anti;
  for (const auto& row : flow) anti.push_back(grid_.dx_inv(row, tol_mean_));
  Field xi = zeros(n_, grid_.size());
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t l = 0; l < n_; ++l) {
      const double e = eta_lower_[j * n_ + l];
      if (e == 0.0) continue;
      for (std::size_t m = 0; m < grid_.size(); ++m) xi[j][m] += e * anti[l][m];
    }
  }
  return apply_p1(u, xi);
}

Field SpectralModel::flow(const FieldState& u, int n) const {
  if (n < 1) throw Error(ErrorCode::Schema, "flow index must be >= 1");
  Field f = derivative(u.values);
  for (int k = 0; k < n; ++k) f = recursion_apply(u, f);
  return f;
}

Field SpectralModel::gradient(const HamiltonianDensity& h, const FieldState& u) const {
  std::vector<CompiledPoly> grad;
  for (const Poly& p : variational_derivative(h)) grad.emplace_back(p);
  Field out = zeros(n_, grid_.size());
  for (std::size_t m = 0; m < grid_.size(); ++m) {
    const std::vector<double> p = point(u, m);
    for (std::size_t i = 0; i < n_; ++i) out[i][m] = grad[i](p);
  }
  return out;
}

double SpectralModel::functional(const Poly& density, const FieldState& u) const {
  const CompiledPoly h(density);
  std::vector<double> vals(grid_.size());
  for (std::size_t m = 0; m < grid_.size(); ++m) vals[m] = h(point(u, m));
  return grid_.integrate(vals);
}

namespace {

struct Monitor {
  std::vector<CompiledPoly> densities;

  void record(const SpectralModel& model, const FieldState& u, ConservationSeries& s) const {
    const Grid& g = model.grid();
    std::vector<double> vals(g.size());
    for (std::size_t f = 0; f < densities.size(); ++f) {
      for (std::size_t m = 0; m < g.size(); ++m) {
        std::vector<double> p(model.nvars());
        for (std::size_t i = 0; i < model.nvars(); ++i) p[i] = u.values[i][m];
        vals[m] = densities[f](p);
      }
      s.values[f].push_back(g.integrate(vals));
      if (s.scales.size() < densities.size()) {
        for (double& v : vals) v = std::abs(v);
        s.scales.push_back(g.integrate(vals));
      }
    }
    s.times.push_back(u.time);
  }
};

double max_speed(const SpectralModel& model, const Matrix<CompiledPoly>& chars, const FieldState& u) {
  double speed = 0.0;
  const std::size_t n = model.nvars();
  std::vector<double> p(n);
  for (std::size_t m = 0; m < model.grid().size(); ++m) {
    for (std::size_t i = 0; i < n; ++i) p[i] = u.values[i][m];
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::abs(chars(i, j)(p));
      speed = std::max(speed, row);
    }
  }
  return speed;
}

}  // namespace

IntegrationResult integrate(const SpectralModel& model, int n, const FieldState& u0, double dt,
                            std::size_t steps, const IntegrateOptions& options) {
  const std::size_t nv = model.nvars();
  const Grid& g = model.grid();
  check_field(u0.values, nv, g.size(), "initial state");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::Schema, "dt must be positive and finite");
  if (n < 1) throw Error(ErrorCode::Schema, "flow index must be >= 1");
  if (!all_finite(u0.values)) throw BlowUpError(u0.time, 0);

  IntegrationResult result;
  Monitor mon;
  for (std::size_t i = 0; i < nv; ++i) {
    result.series.names.push_back("U" + std::to_string(i + 1));
    mon.densities.emplace_back(Poly::variable(nv, i));
  }
  result.series.names.push_back("H1");
  mon.densities.emplace_back(model.flow_system().h1_density);
  result.series.names.push_back("H2");
  mon.densities.emplace_back(model.flow_system().h2_density);
  result.series.values.resize(mon.densities.size());

  Matrix<CompiledPoly> chars(nv, CompiledPoly());
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) chars(i, j) = CompiledPoly(model.flow_system().char_matrix(i, j));
  }
  bool warned = false;
  auto cfl_check = [&](const FieldState& u) {
    if (n != 1 || warned) return;
    const double bound = 0.5 * g.spacing();
    const double speed = max_speed(model, chars, u);
    if (dt * speed > bound) {
      std::ostringstream os;
      os << "dt * max speed = " << dt * speed << " exceeds the advisory bound " << bound << " at t = " << u.time;
      result.warnings.push_back(os.str());
      warned = true;
    }
  };

  FieldState u = u0;
  mon.record(model, u, result.series);
  result.trajectory.push_back(u);
  cfl_check(u);

  for (std::size_t step = 1; step <= steps; ++step) {
    FieldState stage{u.values, u.time};
    const Field k1 = model.flow(stage, n);
    stage.values = axpy(u.values, 0.5 * dt, k1);
    const Field k2 = model.flow(stage, n);
    stage.values = axpy(u.values, 0.5 * dt, k2);
    const Field k3 = model.flow(stage, n);
    stage.values = axpy(u.values, dt, k3);
    const Field k4 = model.flow(stage, n);
    Field next = u.values;
    for (std::size_t i = 0; i < nv; ++i) {
      for (std::size_t m = 0; m < g.size(); ++m) {
        next[i][m] += dt / 6.0 * (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]);
      }
    }
    if (!all_finite(next)) throw BlowUpError(u.time, step - 1);
    u.values = std::move(next);
    u.time = u0.time + static_cast<double>(step) * dt;
    mon.record(model, u, result.series);
    cfl_check(u);
    if (options.snapshot_every > 0 ? step % options.snapshot_every == 0 : step == steps) {
      result.trajectory.push_back(u);
    }
  }
  if (result.trajectory.back().time != u.time) result.trajectory.push_back(u);
  return result;
}

double bracket_quadrature(const SpectralModel& model, const HamiltonianDensity& a, const HamiltonianDensity& b,
                          const FieldState& u, int which) {
  if (which != 1 && which != 2) throw Error(ErrorCode::Schema, "bracket index must be 1 or 2");
  const Field xa = model.gradient(a, u);
  const Field xb = model.gradient(b, u);
  const Field image = which == 1 ? model.apply_p1(u, xb) : model.apply_p2(xb);
  const Grid& g = model.grid();
  std::vector<double> integrand(g.size(), 0.0);
  for (std::size_t i = 0; i < model.nvars(); ++i) {
    for (std::size_t m = 0; m < g.size(); ++m) integrand[m] += xa[i][m] * image[i][m];
  }
  return g.integrate(integrand);
}

void write_conservation_csv(std::ostream& os, const ConservationSeries& s) {
  os << "step,time";
  for (const auto& name : s.names) os << ',' << name;
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    os << k << ',' << s.times[k];
    for (const auto& v : s.values) os << ',' << v[k];
    os << '\n';
  }
}

void write_field_csv(std::ostream& os, const Grid& grid, const FieldState& u) {
  os << 'x';
  for (std::size_t i = 0; i < u.values.size(); ++i) os << ",u" << i + 1;
  os << '\n' << std::setprecision(17);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    os << grid.nodes()[m];
    for (const auto& row : u.values) os << ',' << row[m];
    os << '\n';
  }
}

}  // namespace pencil
