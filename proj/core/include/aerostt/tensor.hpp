#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace aerostt {

/// Dense row-major tensor of rank 1 to 4. Index 0 is the slowest varying.
template <class T>
class BasicTensor {
 public:
  BasicTensor() = default;

  explicit BasicTensor(std::initializer_list<std::size_t> dims) { reshape(dims); }

  void reshape(std::initializer_list<std::size_t> dims) {
    if (dims.size() == 0 || dims.size() > 4) throw std::invalid_argument("tensor rank must be 1..4");
    rank_ = dims.size();
    dims_ = {1, 1, 1, 1};
    std::size_t k = 0;
    for (auto d : dims) dims_[k++] = d;
    data_.assign(std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>()), T(0));
  }

  std::size_t rank() const { return rank_; }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i) { return data_[i]; }
  const T& operator()(std::size_t i) const { return data_[i]; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * dims_[1] + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * dims_[1] + j]; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dims_[1] + j) * dims_[2] + k];
  }
  T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[((i * dims_[1] + j) * dims_[2] + k) * dims_[3] + l];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * dims_[1] + j) * dims_[2] + k) * dims_[3] + l];
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

  bool same_shape(const BasicTensor& o) const { return rank_ == o.rank_ && dims_ == o.dims_; }

  BasicTensor& operator+=(const BasicTensor& o) {
    assert(same_shape(o));
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  BasicTensor& operator-=(const BasicTensor& o) {
    assert(same_shape(o));
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  BasicTensor& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend BasicTensor operator+(BasicTensor a, const BasicTensor& b) { return a += b; }
  friend BasicTensor operator-(BasicTensor a, const BasicTensor& b) { return a -= b; }

 private:
  std::size_t rank_ = 0;
  std::array<std::size_t, 4> dims_{1, 1, 1, 1};
  std::vector<T> data_;
};

using Tensor = BasicTensor<double>;

template <class T>
T frobenius_norm(const BasicTensor<T>& t) {
  using std::sqrt;
  T s(0);
  for (const auto& x : t.data()) s += x * x;
  return sqrt(s);
}

template <class T>
BasicTensor<T> identity_matrix(std::size_t n) {
  BasicTensor<T> m({n, n});
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <class To, class From>
BasicTensor<To> tensor_cast(const BasicTensor<From>& in) {
  BasicTensor<To> out;
  switch (in.rank()) {
    case 1: out.reshape({in.dim(0)}); break;
    case 2: out.reshape({in.dim(0), in.dim(1)}); break;
    case 3: out.reshape({in.dim(0), in.dim(1), in.dim(2)}); break;
    case 4: out.reshape({in.dim(0), in.dim(1), in.dim(2), in.dim(3)}); break;
    default: return out;
  }
  for (std::size_t i = 0; i < in.size(); ++i) out(i) = static_cast<To>(in(i));
  return out;
}

/// Averages a rank-3 (i, a, b) tensor over permutations of its trailing two indices.
template <class T>
void symmetrize_trailing2(BasicTensor<T>& t) {
  const std::size_t n = t.dim(0), m = t.dim(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        const T avg = (t(i, a, b) + t(i, b, a)) / T(2);
        t(i, a, b) = avg;
        t(i, b, a) = avg;
      }
}

/// Averages a rank-4 (i, a, b, c) tensor over permutations of its trailing three indices.
template <class T>
void symmetrize_trailing3(BasicTensor<T>& t) {
  const std::size_t n = t.dim(0), m = t.dim(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b)
        for (std::size_t c = b; c < m; ++c) {
          T* p[6] = {&t(i, a, b, c), &t(i, a, c, b), &t(i, b, a, c),
                     &t(i, b, c, a), &t(i, c, a, b), &t(i, c, b, a)};
          T sum(0);
          for (T* x : p) sum += *x;
          const T avg = sum / T(6);
          for (T* x : p) *x = avg;
        }
}

}  // namespace aerostt
