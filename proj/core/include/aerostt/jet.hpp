#pragma once

// Forward-mode automatic differentiation truncated at third order.
//
// A Jet carries a value together with every first, second and third partial
// derivative with respect to N independent variables. Second and third
// partials are stored once per sorted index tuple (i <= j, i <= j <= k).
// Arithmetic follows the Leibniz rule for products and Faa di Bruno's formula
// for elementary functions, so the partials of any composed expression are
// exact up to rounding.

#include <array>
#include <cmath>
#include <cstddef>

#include "aerostt/scalar.hpp"

namespace aerostt {

template <std::size_t N>
struct JetLayout {
  static constexpr std::size_t kPairs = N * (N + 1) / 2;
  static constexpr std::size_t kTriples = N * (N + 1) * (N + 2) / 6;

  std::array<std::array<std::size_t, N>, N> pair{};
  std::array<std::array<std::array<std::size_t, N>, N>, N> triple{};
  // For each packed pair: its two indices.
  std::array<std::array<std::size_t, 2>, kPairs> pair_index{};
  // For each packed triple (i,j,k): indices i,j,k and packed pairs (j,k), (i,k), (i,j).
  std::array<std::array<std::size_t, 3>, kTriples> triple_index{};
  std::array<std::array<std::size_t, 3>, kTriples> triple_pairs{};

  constexpr JetLayout() {
    std::size_t p = 0;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i; j < N; ++j) {
        pair[i][j] = p;
        pair[j][i] = p;
        pair_index[p] = {i, j};
        ++p;
      }
    }
    std::size_t q = 0;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = i; j < N; ++j) {
        for (std::size_t k = j; k < N; ++k) {
          const std::size_t perm[6][3] = {{i, j, k}, {i, k, j}, {j, i, k},
                                          {j, k, i}, {k, i, j}, {k, j, i}};
          for (const auto& s : perm) triple[s[0]][s[1]][s[2]] = q;
          triple_index[q] = {i, j, k};
          triple_pairs[q] = {pair[j][k], pair[i][k], pair[i][j]};
          ++q;
        }
      }
    }
  }
};

template <std::size_t N>
inline constexpr JetLayout<N> kJetLayout{};

template <class T, std::size_t N = 7>
struct Jet {
  static constexpr std::size_t kVars = N;
  static constexpr std::size_t kPairs = JetLayout<N>::kPairs;
  static constexpr std::size_t kTriples = JetLayout<N>::kTriples;

  T v{};
  std::array<T, N> d1{};
  std::array<T, kPairs> d2{};
  std::array<T, kTriples> d3{};

  Jet() = default;
  Jet(T value) : v(value) {}  // NOLINT(google-explicit-constructor): constants mix freely
  Jet(double value) requires(!std::is_same_v<T, double>) : v(T(value)) {}

  static Jet variable(T value, std::size_t index) {
    Jet out(value);
    out.d1[index] = T(1);
    return out;
  }

  const T& hessian(std::size_t i, std::size_t j) const { return d2[kJetLayout<N>.pair[i][j]]; }
  const T& third(std::size_t i, std::size_t j, std::size_t k) const {
    return d3[kJetLayout<N>.triple[i][j][k]];
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d1[i] += o.d1[i];
    for (std::size_t i = 0; i < kPairs; ++i) d2[i] += o.d2[i];
    for (std::size_t i = 0; i < kTriples; ++i) d3[i] += o.d3[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d1[i] -= o.d1[i];
    for (std::size_t i = 0; i < kPairs; ++i) d2[i] -= o.d2[i];
    for (std::size_t i = 0; i < kTriples; ++i) d3[i] -= o.d3[i];
    return *this;
  }
  Jet& operator*=(const T& s) {
    v *= s;
    for (auto& x : d1) x *= s;
    for (auto& x : d2) x *= s;
    for (auto& x : d3) x *= s;
    return *this;
  }
  Jet& operator+=(const T& s) {
    v += s;
    return *this;
  }
  Jet& operator*=(const Jet& o);

  Jet operator-() const {
    Jet out = *this;
    out *= T(-1);
    return out;
  }
};

namespace detail {

/// Composes an elementary function f with u given f(u.v) and its first three derivatives.
template <class T, std::size_t N>
Jet<T, N> chain(const Jet<T, N>& u, const T& f0, const T& f1, const T& f2, const T& f3) {
  constexpr const auto& L = kJetLayout<N>;
  Jet<T, N> out;
  out.v = f0;
  for (std::size_t i = 0; i < N; ++i) out.d1[i] = f1 * u.d1[i];
  for (std::size_t p = 0; p < Jet<T, N>::kPairs; ++p) {
    const auto [i, j] = L.pair_index[p];
    out.d2[p] = f1 * u.d2[p] + f2 * u.d1[i] * u.d1[j];
  }
  for (std::size_t q = 0; q < Jet<T, N>::kTriples; ++q) {
    const auto [i, j, k] = L.triple_index[q];
    const auto [jk, ik, ij] = L.triple_pairs[q];
    out.d3[q] = f1 * u.d3[q] +
                f2 * (u.d2[ij] * u.d1[k] + u.d2[ik] * u.d1[j] + u.d2[jk] * u.d1[i]) +
                f3 * u.d1[i] * u.d1[j] * u.d1[k];
  }
  return out;
}

}  // namespace detail

template <class T, std::size_t N>
Jet<T, N>& Jet<T, N>::operator*=(const Jet& o) {
  constexpr const auto& L = kJetLayout<N>;
  const Jet& u = *this;
  Jet out;
  out.v = u.v * o.v;
  for (std::size_t i = 0; i < N; ++i) out.d1[i] = u.v * o.d1[i] + u.d1[i] * o.v;
  for (std::size_t p = 0; p < kPairs; ++p) {
    const auto [i, j] = L.pair_index[p];
    out.d2[p] = u.v * o.d2[p] + u.d2[p] * o.v + u.d1[i] * o.d1[j] + u.d1[j] * o.d1[i];
  }
  for (std::size_t q = 0; q < kTriples; ++q) {
    const auto [i, j, k] = L.triple_index[q];
    const auto [jk, ik, ij] = L.triple_pairs[q];
    out.d3[q] = u.v * o.d3[q] + u.d3[q] * o.v +
                u.d1[i] * o.d2[jk] + u.d1[j] * o.d2[ik] + u.d1[k] * o.d2[ij] +
                o.d1[i] * u.d2[jk] + o.d1[j] * u.d2[ik] + o.d1[k] * u.d2[ij];
  }
  *this = out;
  return *this;
}

template <class T, std::size_t N>
Jet<T, N> operator+(Jet<T, N> a, const Jet<T, N>& b) { return a += b; }
template <class T, std::size_t N>
Jet<T, N> operator-(Jet<T, N> a, const Jet<T, N>& b) { return a -= b; }
template <class T, std::size_t N>
Jet<T, N> operator*(Jet<T, N> a, const Jet<T, N>& b) { return a *= b; }

template <class T, std::size_t N>
Jet<T, N> operator+(Jet<T, N> a, const T& s) { return a += s; }
template <class T, std::size_t N>
Jet<T, N> operator+(const T& s, Jet<T, N> a) { return a += s; }
template <class T, std::size_t N>
Jet<T, N> operator-(Jet<T, N> a, const T& s) { return a += -s; }
template <class T, std::size_t N>
Jet<T, N> operator-(const T& s, const Jet<T, N>& a) { return (-a) += s; }
template <class T, std::size_t N>
Jet<T, N> operator*(Jet<T, N> a, const T& s) { return a *= s; }
template <class T, std::size_t N>
Jet<T, N> operator*(const T& s, Jet<T, N> a) { return a *= s; }
template <class T, std::size_t N>
Jet<T, N> operator/(Jet<T, N> a, const T& s) { return a *= T(1) / s; }

template <class T, std::size_t N>
Jet<T, N> reciprocal(const Jet<T, N>& u) {
  const T r = T(1) / u.v;
  const T r2 = r * r;
  return detail::chain(u, r, -r2, T(2) * r2 * r, T(-6) * r2 * r2);
}

template <class T, std::size_t N>
Jet<T, N> operator/(const Jet<T, N>& a, const Jet<T, N>& b) { return a * reciprocal(b); }
template <class T, std::size_t N>
Jet<T, N> operator/(const T& s, const Jet<T, N>& b) { return reciprocal(b) *= s; }

template <class T, std::size_t N>
Jet<T, N> sin(const Jet<T, N>& u) {
  using std::cos;
  using std::sin;
  const T s = sin(u.v), c = cos(u.v);
  return detail::chain(u, s, c, -s, -c);
}

template <class T, std::size_t N>
Jet<T, N> cos(const Jet<T, N>& u) {
  using std::cos;
  using std::sin;
  const T s = sin(u.v), c = cos(u.v);
  return detail::chain(u, c, -s, -c, s);
}

template <class T, std::size_t N>
Jet<T, N> tan(const Jet<T, N>& u) {
  using std::tan;
  const T t = tan(u.v);
  const T sec2 = T(1) + t * t;
  return detail::chain(u, t, sec2, T(2) * t * sec2, T(2) * sec2 * (T(1) + T(3) * t * t));
}

template <class T, std::size_t N>
Jet<T, N> exp(const Jet<T, N>& u) {
  using std::exp;
  const T e = exp(u.v);
  return detail::chain(u, e, e, e, e);
}

template <class T, std::size_t N>
Jet<T, N> log(const Jet<T, N>& u) {
  using std::log;
  const T r = T(1) / u.v;
  return detail::chain(u, log(u.v), r, -r * r, T(2) * r * r * r);
}

template <class T, std::size_t N>
Jet<T, N> sqrt(const Jet<T, N>& u) {
  using std::sqrt;
  const T s = sqrt(u.v);
  const T r = T(1) / u.v;
  const T f1 = T(0.5) / s;
  return detail::chain(u, s, f1, T(-0.5) * f1 * r, T(0.75) * f1 * r * r);
}

template <class T, std::size_t N>
T value_of(const Jet<T, N>& u) { return u.v; }

}  // namespace aerostt
