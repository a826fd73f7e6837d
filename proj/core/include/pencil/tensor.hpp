#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pencil/error.hpp"

namespace pencil {

/// Dense array of rank `Rank` with every extent equal to n, row-major.
/// Index order follows the written tensor: conn(i, j, k) is b^{ij}_k.
template <class T, std::size_t Rank>
class SquareTensor {
 public:
  SquareTensor() = default;
  SquareTensor(std::size_t n, const T& fill) : n_(n), data_(power(n), fill) {}

  std::size_t extent() const { return n_; }
  std::size_t size() const { return data_.size(); }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  friend bool operator==(const SquareTensor&, const SquareTensor&) = default;

 private:
  static std::size_t power(std::size_t n) {
    std::size_t p = 1;
    for (std::size_t r = 0; r < Rank; ++r) p *= n;
    return p;
  }
  std::size_t offset(const std::array<std::size_t, Rank>& idx) const {
    std::size_t off = 0;
    for (std::size_t r = 0; r < Rank; ++r) {
      if (idx[r] >= n_) throw Error(ErrorCode::IndexOutOfRange, "tensor index out of range");
      off = off * n_ + idx[r];
    }
    return off;
  }

  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <class T>
using Matrix = SquareTensor<T, 2>;
template <class T>
using Tensor3 = SquareTensor<T, 3>;
template <class T>
using Tensor4 = SquareTensor<T, 4>;

}  // namespace pencil
