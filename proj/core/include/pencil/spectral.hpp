#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace pencil {

/// M equally spaced nodes 2*pi*m/M on the circle with FFTW plans for
/// spectral differentiation. M must be a power of two, at least 16.
///
/// The transforms share scratch buffers, so a Grid must not be used from
/// several threads at once.
class Grid {
 public:
  explicit Grid(std::size_t m);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;
  Grid(Grid&&) noexcept;
  Grid& operator=(Grid&&) noexcept;

  std::size_t size() const { return m_; }
  double spacing() const;
  const std::vector<double>& nodes() const { return nodes_; }

  /// Fourier derivative; the Nyquist mode is dropped.
  std::vector<double> dx(std::span<const double> f) const;
  /// Zero-mean antiderivative. Throws Error(NonZeroMean) when
  /// |mean(f)| > tol_mean * max|f|.
  std::vector<double> dx_inv(std::span<const double> f, double tol_mean = 1e-12) const;

  double mean(std::span<const double> f) const;
  /// Periodic trapezoid rule, sum f * 2*pi/M.
  double integrate(std::span<const double> f) const;

 private:
  struct Plans;
  std::size_t m_;
  std::vector<double> nodes_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pencil
