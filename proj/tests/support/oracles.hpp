#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "aerostt/models.hpp"
#include "aerostt/propagation.hpp"
#include "aerostt/qoi.hpp"
#include "aerostt/tensor.hpp"

namespace oracle {

using aerostt::kStateDim;
using aerostt::Tensor;

inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  double s = 0;
  for (auto& x : v) {
    x = nd(rng);
    s += x * x;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

inline Tensor random_tensor(std::mt19937_64& rng, std::initializer_list<std::size_t> dims, double scale = 1.0) {
  std::normal_distribution<double> nd;
  Tensor t(dims);
  for (auto& x : t.storage()) x = scale * nd(rng);
  return t;
}

/// Random STT set with trailing-index symmetric phi2 and phi3.
inline aerostt::SttSet random_stt(std::mt19937_64& rng, std::size_t n, int order = 3) {
  aerostt::SttSet s = aerostt::identity_stt<double>(order, 0.0, n);
  s.phi1 = random_tensor(rng, {n, n});
  if (order >= 2) {
    s.phi2 = random_tensor(rng, {n, n, n});
    aerostt::symmetrize_trailing2(s.phi2);
  }
  if (order >= 3) {
    s.phi3 = random_tensor(rng, {n, n, n, n});
    aerostt::symmetrize_trailing3(s.phi3);
  }
  return s;
}

inline double rel_frobenius(const Tensor& a, const Tensor& ref) {
  double num = 0, den = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a(k) - ref(k)) * (a(k) - ref(k));
    den += ref(k) * ref(k);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

/// Terms a1 = Phi v, a2 = phi2 v v / 2, a3 = phi3 v v v / 6 of the Taylor map along v.
struct DirectionalTerms {
  std::vector<double> a1, a2, a3;
};

inline DirectionalTerms directional_terms(const aerostt::SttSet& s, const std::vector<double>& v) {
  const std::size_t n = s.dim();
  DirectionalTerms t{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      t.a1[i] += s.phi1(i, a) * v[a];
      for (std::size_t b = 0; b < n; ++b) {
        if (s.order >= 2) t.a2[i] += 0.5 * s.phi2(i, a, b) * v[a] * v[b];
        if (s.order >= 3)
          for (std::size_t c = 0; c < n; ++c) t.a3[i] += s.phi3(i, a, b, c) * v[a] * v[b] * v[c] / 6.0;
      }
    }
  return t;
}

/// Coefficients of s^2, s^3, s^4 in sum_i w_i (a1_i s + a2_i s^2 + a3_i s^3)^2 for the listed rows.
inline std::array<double, 3> squared_norm_poly(const DirectionalTerms& t, const std::vector<std::size_t>& rows) {
  std::array<double, 3> c{};
  for (std::size_t i : rows) {
    c[0] += t.a1[i] * t.a1[i];
    c[1] += 2 * t.a1[i] * t.a2[i];
    c[2] += 2 * t.a1[i] * t.a3[i] + t.a2[i] * t.a2[i];
  }
  return c;
}

/// Taylor series written out independently of the library contraction.
template <class V>
V taylor(const aerostt::SttSet& s, const V& dx, int m) {
  const std::size_t n = s.dim();
  V out{};
  for (std::size_t i = 0; i < n; ++i) {
    long double acc = 0;
    for (std::size_t a = 0; a < n; ++a) {
      acc += static_cast<long double>(s.phi1(i, a)) * dx[a];
      for (std::size_t b = 0; b < n && m >= 2; ++b) {
        acc += 0.5L * s.phi2(i, a, b) * dx[a] * dx[b];
        for (std::size_t c = 0; c < n && m >= 3; ++c) acc += s.phi3(i, a, b, c) * dx[a] * dx[b] * dx[c] / 6.0L;
      }
    }
    out[i] = static_cast<typename V::value_type>(acc);
  }
  return out;
}

/// Point-mass apoapsis from Cartesian inertial vectors built out of the 7-state.
inline double cartesian_apoapsis(const aerostt::StateArray& x, double mu, double omega) {
  const double r = x[0], th = x[1], ph = x[2], V = x[3], g = x[4], psi = x[5];
  const std::array<double, 3> e_up{std::cos(ph) * std::cos(th), std::cos(ph) * std::sin(th), std::sin(ph)};
  const std::array<double, 3> e_east{-std::sin(th), std::cos(th), 0.0};
  const std::array<double, 3> e_north{-std::sin(ph) * std::cos(th), -std::sin(ph) * std::sin(th), std::cos(ph)};
  const double east = V * std::cos(g) * std::sin(psi) + omega * r * std::cos(ph);
  const double north = V * std::cos(g) * std::cos(psi);
  const double up = V * std::sin(g);
  std::array<double, 3> rv{}, vv{};
  for (int k = 0; k < 3; ++k) {
    rv[k] = r * e_up[k];
    vv[k] = east * e_east[k] + north * e_north[k] + up * e_up[k];
  }
  const std::array<double, 3> h{rv[1] * vv[2] - rv[2] * vv[1], rv[2] * vv[0] - rv[0] * vv[2],
                                rv[0] * vv[1] - rv[1] * vv[0]};
  const double h2 = h[0] * h[0] + h[1] * h[1] + h[2] * h[2];
  const double v2 = vv[0] * vv[0] + vv[1] * vv[1] + vv[2] * vv[2];
  const double eps = 0.5 * v2 - mu / r;
  const double a = -mu / (2 * eps);
  const double e = std::sqrt(std::max(0.0, 1 + 2 * eps * h2 / (mu * mu)));
  return a * (1 + e);
}

/// T v v v for a dense rank-3 tensor, summed term by term.
inline double taylor_form3(const Tensor& t, const std::vector<double>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t k = 0; k < v.size(); ++k) s += t(i, j, k) * v[i] * v[j] * v[k];
  return s;
}

inline double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return std::isnan(x); }), v.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
