#include "aerostt/tensor_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace aerostt {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Eigen::MatrixXd to_matrix(const std::vector<double>& flat, std::size_t n) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * n + j];
  return m;
}

double residual_of(const SymmetricTensor& t, const std::vector<double>& v, double lambda) {
  const auto g = t.contract_vector(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (g[i] - lambda * v[i]) * (g[i] - lambda * v[i]);
  return std::sqrt(s);
}

/// Newton iterations on T v^{m-1} = lambda v, v.v = 1; keeps the best iterate.
void polish(const SymmetricTensor& t, std::vector<double>& v, double& lambda, double& residual) {
  const std::size_t n = t.n;
  const auto ni = static_cast<Eigen::Index>(n);
  const double m = t.order;
  for (int it = 0; it < 6; ++it) {
    const auto g = t.contract_vector(v);
    const Eigen::MatrixXd h = to_matrix(t.contract_matrix(v), n);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(ni + 1, ni + 1);
    Eigen::VectorXd F(ni + 1);
    for (Eigen::Index i = 0; i < ni; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      for (Eigen::Index j = 0; j < ni; ++j) J(i, j) = (m - 1.0) * h(i, j);
      J(i, i) -= lambda;
      J(i, ni) = -v[ui];
      J(ni, i) = -v[ui];
      F(i) = g[ui] - lambda * v[ui];
    }
    F(ni) = 0.5 * (1.0 - dot(v, v));
    const Eigen::VectorXd step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) return;
    std::vector<double> vn(n);
    for (std::size_t i = 0; i < n; ++i) vn[i] = v[i] + step(static_cast<Eigen::Index>(i));
    const double nv = norm2(vn);
    if (!(nv > 0)) return;
    for (double& x : vn) x /= nv;
    const double ln = t.contract(vn);
    const double rn = residual_of(t, vn, ln);
    if (!(rn < residual)) return;
    v = std::move(vn);
    lambda = ln;
    residual = rn;
  }
}

}  // namespace

Eigenpair ss_hopm(const SymmetricTensor& t, std::vector<double> v, const SsHopmConfig& cfg, int start) {
  if (t.order < 2) throw std::invalid_argument("ss_hopm: tensor order must be at least 2");
  if (v.size() != t.n) throw std::invalid_argument("ss_hopm: start vector dimension mismatch");
  const double nv0 = norm2(v);
  if (!(nv0 > 0)) throw std::invalid_argument("ss_hopm: zero start vector");
  for (double& x : v) x /= nv0;
  const std::size_t n = t.n;
  const double m = t.order;
  const double scale = std::max(1.0, t.norm());

  Eigenpair out;
  out.start = start;
  double lambda = t.contract(v);
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    auto g = t.contract_vector(v);
    double alpha = cfg.fixed_shift;
    if (alpha < 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_matrix(t.contract_matrix(v), n), Eigen::EigenvaluesOnly);
      const double hmin = m * (m - 1.0) * es.eigenvalues()(0);
      alpha = std::max(0.0, (cfg.tau - hmin) / m);
    }
    for (std::size_t i = 0; i < n; ++i) g[i] += alpha * v[i];
    const double ng = norm2(g);
    if (!(ng > 0) || !std::isfinite(ng)) break;
    double dv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g[i] /= ng;
      dv += (g[i] - v[i]) * (g[i] - v[i]);
    }
    v.swap(g);
    const double lambda_new = t.contract(v);
    const bool settled = std::abs(lambda_new - lambda) < cfg.lambda_tol * std::max(1.0, std::abs(lambda_new)) &&
                         std::sqrt(dv) < 1e-9;
    lambda = lambda_new;
    if (settled) {
      ++it;
      break;
    }
  }
  double residual = residual_of(t, v, lambda);
  if (cfg.newton_polish && residual / scale > 1e-15) polish(t, v, lambda, residual);
  out.lambda = lambda;
  out.v = std::move(v);
  out.residual = residual;
  out.relative_residual = residual / scale;
  out.iterations = it;
  out.converged = std::isfinite(lambda) && out.relative_residual < cfg.residual_tol;
  return out;
}

EigenSearchResult max_eigenpair(const SymmetricTensor& t, const EigenSearchConfig& cfg) {
  if (cfg.n_starts < 1) throw std::invalid_argument("max_eigenpair: need at least one start");
  const double cos_tol = std::cos(cfg.dedup_angle);
  EigenSearchResult res;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int s = 0; s < cfg.n_starts; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(s)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::vector<double> v0(t.n);
    for (double& x : v0) x = normal(rng);
    Eigenpair p = ss_hopm(t, std::move(v0), cfg.hopm, s);
    best_residual = std::min(best_residual, p.relative_residual);
    if (!p.converged) continue;
    ++res.n_converged;
    if (t.order % 2 == 1 && p.lambda < 0) {
      p.lambda = -p.lambda;
      for (double& x : p.v) x = -x;
    }
    bool duplicate = false;
    for (auto& kept : res.candidates) {
      if (std::abs(dot(kept.v, p.v)) > cos_tol) {
        duplicate = true;
        if (p.residual < kept.residual) kept = p;
        break;
      }
    }
    if (!duplicate) res.candidates.push_back(std::move(p));
  }
  if (res.candidates.empty()) {
    std::ostringstream msg;
    msg << "max_eigenpair: none of " << cfg.n_starts << " starts converged (order " << t.order
        << ", best relative residual " << best_residual << ")";
    throw std::runtime_error(msg.str());
  }
  std::stable_sort(res.candidates.begin(), res.candidates.end(),
                   [](const Eigenpair& a, const Eigenpair& b) { return a.lambda > b.lambda; });
  res.best = res.candidates.front();
  return res;
}

double vector_angle(const std::vector<double>& v1, const std::vector<double>& v2) {
  if (v1.size() != v2.size()) throw std::invalid_argument("vector_angle: dimension mismatch");
  const double n1 = norm2(v1), n2 = norm2(v2);
  if (!(n1 > 0) || !(n2 > 0)) throw std::invalid_argument("vector_angle: zero vector");
  const double c = std::min(1.0, std::abs(dot(v1, v2)) / (n1 * n2));
  return std::acos(c) * 180.0 / 3.14159265358979323846;
}

void normalize_sign(std::vector<double>& v) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  if (!v.empty() && v[k] < 0)
    for (double& x : v) x = -x;
}

SymmetricEigen symmetric_eigen(const Tensor& matrix) {
  if (matrix.rank() != 2 || matrix.dim(0) != matrix.dim(1))
    throw std::invalid_argument("symmetric_eigen: expects a square matrix");
  const std::size_t n = matrix.dim(0);
  std::vector<double> flat(matrix.data().begin(), matrix.data().end());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_matrix(flat, n));
  if (es.info() != Eigen::Success) throw std::runtime_error("symmetric_eigen: decomposition failed");
  struct Item {
    double value;
    std::size_t lead;
    std::vector<double> v;
  };
  std::vector<Item> items;
  for (std::size_t k = 0; k < n; ++k) {
    Item it;
    it.value = es.eigenvalues()(static_cast<Eigen::Index>(k));
    it.v.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      it.v[i] = es.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    normalize_sign(it.v);
    it.lead = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(it.v[i]) > std::abs(it.v[it.lead])) it.lead = i;
    items.push_back(std::move(it));
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.lead < b.lead;
  });
  SymmetricEigen out;
  for (auto& it : items) {
    out.values.push_back(it.value);
    out.vectors.push_back(std::move(it.v));
  }
  return out;
}

}  // namespace aerostt
