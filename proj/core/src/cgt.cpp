#include "aerostt/cgt.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

namespace aerostt {

namespace {

std::size_t flat(const Tensor& t, const std::array<std::size_t, 4>& idx) {
  std::size_t off = 0;
  for (std::size_t k = 0; k < t.rank(); ++k) off = off * t.dim(k) + idx[k];
  return off;
}

void check_cubic(const Tensor& t) {
  for (std::size_t k = 1; k < t.rank(); ++k)
    if (t.dim(k) != t.dim(0)) throw std::invalid_argument("tensor must have equal dimensions");
}

void require_order(const SttSet& stt, int m) {
  if (m < 2 || m > 4) throw std::invalid_argument("CGT order must be 2..4");
  if (stt.order < m - 1) throw std::invalid_argument("CGT order " + std::to_string(m) + " needs STTs of order " +
                                                     std::to_string(m - 1));
}

}  // namespace

double contract_all(const Tensor& t, const std::vector<double>& v) {
  check_cubic(t);
  const std::size_t n = t.dim(0);
  if (v.size() != n) throw std::invalid_argument("contract_all: dimension mismatch");
  // Contract the last index repeatedly.
  std::vector<double> cur(t.data().begin(), t.data().end());
  for (std::size_t r = t.rank(); r > 0; --r) {
    std::vector<double> next(cur.size() / n, 0.0);
    for (std::size_t k = 0; k < next.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += cur[k * n + j] * v[j];
      next[k] = s;
    }
    cur.swap(next);
  }
  return cur[0];
}

double SymmetricTensor::contract(const std::vector<double>& v) const { return contract_all(data, v); }

std::vector<double> SymmetricTensor::contract_vector(const std::vector<double>& v) const {
  std::vector<double> cur(data.data().begin(), data.data().end());
  for (int r = order; r > 1; --r) {
    std::vector<double> next(cur.size() / n, 0.0);
    for (std::size_t k = 0; k < next.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += cur[k * n + j] * v[j];
      next[k] = s;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> SymmetricTensor::contract_matrix(const std::vector<double>& v) const {
  std::vector<double> cur(data.data().begin(), data.data().end());
  for (int r = order; r > 2; --r) {
    std::vector<double> next(cur.size() / n, 0.0);
    for (std::size_t k = 0; k < next.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += cur[k * n + j] * v[j];
      next[k] = s;
    }
    cur.swap(next);
  }
  return cur;
}

SymmetricTensor symmetrize(const Tensor& t) {
  check_cubic(t);
  SymmetricTensor out;
  out.order = static_cast<int>(t.rank());
  out.n = t.dim(0);
  out.data = t;
  const std::size_t m = t.rank(), n = t.dim(0);
  if (m < 2) return out;
  std::array<std::size_t, 4> idx{0, 0, 0, 0};
  // Visit each sorted index tuple once and average over its distinct permutations.
  auto visit = [&](auto&& self, std::size_t depth, std::size_t lo) -> void {
    if (depth == m) {
      std::array<std::size_t, 4> p = idx;
      std::set<std::size_t> offsets;
      double sum = 0.0;
      std::size_t count = 0;
      do {
        const std::size_t f = flat(t, p);
        sum += t(f);
        ++count;
        offsets.insert(f);
      } while (std::next_permutation(p.begin(), p.begin() + static_cast<long>(m)));
      const double avg = sum / static_cast<double>(count);
      for (std::size_t f : offsets) out.data(f) = avg;
      return;
    }
    for (std::size_t i = lo; i < n; ++i) {
      idx[depth] = i;
      self(self, depth + 1, i);
    }
  };
  visit(visit, 0, 0);
  return out;
}

SelectionMatrix::SelectionMatrix(std::vector<std::size_t> rows, std::size_t n) : rows_(std::move(rows)), n_(n) {
  if (rows_.empty() || rows_.size() > n_) throw std::invalid_argument("selection matrix must have 1..n rows");
  std::set<std::size_t> seen;
  for (std::size_t r : rows_) {
    if (r >= n_) throw std::invalid_argument("selection index out of range");
    if (!seen.insert(r).second) throw std::invalid_argument("selection rows must be distinct");
  }
}

Tensor SelectionMatrix::matrix() const {
  Tensor s({rows_.size(), n_});
  for (std::size_t k = 0; k < rows_.size(); ++k) s(k, rows_[k]) = 1.0;
  return s;
}

SelectionMatrix position_speed_fpa_selection() { return SelectionMatrix({kR, kV, kGamma}, kStateDim); }

Tensor second_order_cgt(const Tensor& phi1) {
  if (phi1.rank() != 2) throw std::invalid_argument("second_order_cgt: expects a matrix");
  const std::size_t w = phi1.dim(0), n = phi1.dim(1);
  Tensor c({n, n});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < w; ++i) s += phi1(i, a) * phi1(i, b);
      c(a, b) = s;
      c(b, a) = s;
    }
  return c;
}

Tensor squared_norm_coeffs(const ExpansionMaps& g, int m) {
  const std::size_t w = g.g1.dim(0), n = g.g1.dim(1);
  switch (m) {
    case 2: return second_order_cgt(g.g1);
    case 3: {
      if (g.g2.empty()) throw std::invalid_argument("squared_norm_coeffs: order 3 needs second-order maps");
      Tensor c({n, n, n});
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t d = 0; d < n; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < w; ++i) s += g.g1(i, a) * g.g2(i, b, d);
            c(a, b, d) = s;
          }
      return c;
    }
    case 4: {
      if (g.g3.empty()) throw std::invalid_argument("squared_norm_coeffs: order 4 needs third-order maps");
      Tensor c({n, n, n, n});
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t d = 0; d < n; ++d)
            for (std::size_t e = 0; e < n; ++e) {
              double s1 = 0.0, s2 = 0.0;
              for (std::size_t i = 0; i < w; ++i) {
                s1 += g.g1(i, a) * g.g3(i, b, d, e);
                s2 += g.g2(i, a, b) * g.g2(i, d, e);
              }
              c(a, b, d, e) = s1 / 3.0 + s2 / 4.0;
            }
      return c;
    }
    default: throw std::invalid_argument("squared_norm_coeffs: order must be 2..4");
  }
}

ExpansionMaps selected_expansion(const SttSet& stt, const SelectionMatrix& s, int order) {
  const std::size_t n = stt.dim(), w = s.size();
  if (s.n() != n) throw std::invalid_argument("selection matrix dimension mismatch");
  ExpansionMaps g;
  g.g1.reshape({w, n});
  for (std::size_t k = 0; k < w; ++k)
    for (std::size_t a = 0; a < n; ++a) g.g1(k, a) = stt.phi1(s.rows()[k], a);
  if (order >= 2) {
    g.g2.reshape({w, n, n});
    for (std::size_t k = 0; k < w; ++k)
      for (std::size_t a = 0; a < n * n; ++a) g.g2(k * n * n + a) = stt.phi2(s.rows()[k] * n * n + a);
  }
  if (order >= 3) {
    g.g3.reshape({w, n, n, n});
    const std::size_t nn = n * n * n;
    for (std::size_t k = 0; k < w; ++k)
      for (std::size_t a = 0; a < nn; ++a) g.g3(k * nn + a) = stt.phi3(s.rows()[k] * nn + a);
  }
  return g;
}

ExpansionMaps qoi_expansion(const SttSet& stt, const QoiPartials& eta, int order) {
  const std::size_t n = stt.dim(), w = eta.rows();
  if (eta.dim() != n) throw std::invalid_argument("quantity partials dimension mismatch");
  if (eta.order < order) throw std::invalid_argument("quantity partials of insufficient order");
  if (stt.order < order) throw std::invalid_argument("STTs of insufficient order");
  const auto& F = stt.phi1;
  ExpansionMaps g;
  g.g1.reshape({w, n});
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += eta.eta1(q, j) * F(j, a);
      g.g1(q, a) = s;
    }
  if (order < 2) return g;

  // m2[q][a][l] = eta2[q][j][l] F[j][a]
  std::vector<double> m2(w * n * n, 0.0);
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += eta.eta2(q, j, l) * F(j, a);
        m2[(q * n + a) * n + l] = s;
      }
  g.g2.reshape({w, n, n});
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += m2[(q * n + a) * n + l] * F(l, b) + eta.eta1(q, l) * stt.phi2(l, a, b);
        g.g2(q, a, b) = s;
      }
  if (order < 3) return g;

  // w1[q][a][l][m] = eta3[q][j][l][m] F[j][a]; w2[q][a][b][m] = w1[q][a][l][m] F[l][b]
  std::vector<double> w1(w * n * n * n, 0.0), w2(w * n * n * n, 0.0);
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t mm = 0; mm < n; ++mm) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += eta.eta3(q, j, l, mm) * F(j, a);
          w1[((q * n + a) * n + l) * n + mm] = s;
        }
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t mm = 0; mm < n; ++mm) {
          double s = 0.0;
          for (std::size_t l = 0; l < n; ++l) s += w1[((q * n + a) * n + l) * n + mm] * F(l, b);
          w2[((q * n + a) * n + b) * n + mm] = s;
        }
  auto X = [&](std::size_t q, std::size_t a, std::size_t b, std::size_t c) {
    double s = 0.0;
    for (std::size_t l = 0; l < n; ++l) s += m2[(q * n + a) * n + l] * stt.phi2(l, b, c);
    return s;
  };
  g.g3.reshape({w, n, n, n});
  for (std::size_t q = 0; q < w; ++q)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = X(q, a, b, c) + X(q, b, a, c) + X(q, c, a, b);
          for (std::size_t l = 0; l < n; ++l) {
            s += w2[((q * n + a) * n + b) * n + l] * F(l, c);
            s += eta.eta1(q, l) * stt.phi3(l, a, b, c);
          }
          g.g3(q, a, b, c) = s;
        }
  return g;
}

Tensor hocgt_coeffs(const SttSet& stt, int m) {
  require_order(stt, m);
  ExpansionMaps g{stt.phi1, m >= 3 ? stt.phi2 : Tensor{}, m >= 4 ? stt.phi3 : Tensor{}};
  return squared_norm_coeffs(g, m);
}

Tensor scgt_coeffs(const SttSet& stt, const SelectionMatrix& s, int m) {
  require_order(stt, m);
  return squared_norm_coeffs(selected_expansion(stt, s, m - 1), m);
}

Tensor qcgt_coeffs(const SttSet& stt, const QoiPartials& eta, int m) {
  require_order(stt, m);
  return squared_norm_coeffs(qoi_expansion(stt, eta, m - 1), m);
}

}  // namespace aerostt
