#include "pencil/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "pencil/error.hpp"

namespace pencil {

struct Grid::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t m) {
    real = fftw_alloc_real(m);
    spec = fftw_alloc_complex(m / 2 + 1);
    const int n = static_cast<int>(m);
    forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

Grid::Grid(std::size_t m) : m_(m) {
  if (m < 16 || (m & (m - 1)) != 0) {
    throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 16, got " + std::to_string(m));
  }
  nodes_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    nodes_[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
  }
  plans_ = std::make_unique<Plans>(m);
}

Grid::~Grid() = default;
Grid::Grid(Grid&&) noexcept = default;
Grid& Grid::operator=(Grid&&) noexcept = default;

double Grid::spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(m_); }

namespace {

void check_length(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch,
                "field has " + std::to_string(got) + " samples, grid has " + std::to_string(expected));
  }
}

}  // namespace

std::vector<double> Grid::dx(std::span<const double> f) const {
  check_length(m_, f.size());
  std::copy(f.begin(), f.end(), plans_->real);
  fftw_execute(plans_->forward);
  const std::size_t half = m_ / 2;
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k <= half; ++k) {
    // (a + ib) * ik = -kb + ika
    const double kk = (k == half) ? 0.0 : static_cast<double>(k);
    const double re = plans_->spec[k][0];
    const double im = plans_->spec[k][1];
    plans_->spec[k][0] = -kk * im * scale;
    plans_->spec[k][1] = kk * re * scale;
  }
  fftw_execute(plans_->backward);
  return {plans_->real, plans_->real + m_};
}

std::vector<double> Grid::dx_inv(std::span<const double> f, double tol_mean) const {
  check_length(m_, f.size());
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  const double avg = mean(f);
  if (std::abs(avg) > tol_mean * sup) {
    throw Error(ErrorCode::NonZeroMean, "antiderivative of a field with mean " + std::to_string(avg) +
                                            " (max |f| = " + std::to_string(sup) + ")");
  }
  std::copy(f.begin(), f.end(), plans_->real);
  fftw_execute(plans_->forward);
  const std::size_t half = m_ / 2;
  const double scale = 1.0 / static_cast<double>(m_);
  plans_->spec[0][0] = plans_->spec[0][1] = 0.0;
  plans_->spec[half][0] = plans_->spec[half][1] = 0.0;
  for (std::size_t k = 1; k < half; ++k) {
    // (a + ib) / (ik) = b/k - i a/k
    const double kk = static_cast<double>(k);
    const double re = plans_->spec[k][0];
    const double im = plans_->spec[k][1];
    plans_->spec[k][0] = im / kk * scale;
    plans_->spec[k][1] = -re / kk * scale;
  }
  fftw_execute(plans_->backward);
  return {plans_->real, plans_->real + m_};
}

double Grid::mean(std::span<const double> f) const {
  check_length(m_, f.size());
  double s = 0.0;
  for (double v : f) s += v;
  return s / static_cast<double>(m_);
}

double Grid::integrate(std::span<const double> f) const { return mean(f) * 2.0 * std::numbers::pi; }

}  // namespace pencil
