#include "aerostt/dstt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aerostt {

namespace {

Tensor rows_to_tensor(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("basis needs at least one row");
  Tensor r({rows.size(), rows.front().size()});
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != rows.front().size()) throw std::invalid_argument("basis rows differ in length");
    for (std::size_t a = 0; a < rows[k].size(); ++a) r(k, a) = rows[k][a];
  }
  return r;
}

/// Top-l eigen directions of a symmetric tensor family member.
void eigen_rows(const Tensor& coeffs, std::size_t l, const EigenSearchConfig& cfg,
                std::vector<std::vector<double>>& rows, std::vector<double>& lambdas) {
  const auto res = max_eigenpair(symmetrize(coeffs), cfg);
  if (res.candidates.size() < l)
    throw std::runtime_error("build_basis: only " + std::to_string(res.candidates.size()) +
                             " distinct eigenpairs found, " + std::to_string(l) + " requested");
  for (std::size_t k = 0; k < l; ++k) {
    auto v = res.candidates[k].v;
    normalize_sign(v);
    rows.push_back(std::move(v));
    lambdas.push_back(res.candidates[k].lambda);
  }
}

}  // namespace

const char* to_string(BasisMethod m) {
  switch (m) {
    case BasisMethod::Cgt2TopL: return "cgt2-top-l";
    case BasisMethod::Hocgt: return "hocgt";
    case BasisMethod::Scgt: return "scgt";
    case BasisMethod::QcgtEnergy: return "qcgt-energy";
    case BasisMethod::QcgtApoapsis: return "qcgt-apoapsis";
  }
  return "unknown";
}

BasisMethod basis_method_from_string(const std::string& s) {
  for (auto m : {BasisMethod::Cgt2TopL, BasisMethod::Hocgt, BasisMethod::Scgt, BasisMethod::QcgtEnergy,
                 BasisMethod::QcgtApoapsis})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown basis method: " + s);
}

std::vector<std::vector<double>> orthonormalize_rows(std::vector<std::vector<double>> rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double n0 = 0.0;
    for (double x : rows[k]) n0 += x * x;
    n0 = std::sqrt(n0);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < k; ++j) {
        double d = 0.0;
        for (std::size_t a = 0; a < rows[k].size(); ++a) d += rows[k][a] * rows[j][a];
        for (std::size_t a = 0; a < rows[k].size(); ++a) rows[k][a] -= d * rows[j][a];
      }
    double nk = 0.0;
    for (double x : rows[k]) nk += x * x;
    nk = std::sqrt(nk);
    if (!(nk > 1e-10 * n0) || !(n0 > 0)) throw std::invalid_argument("orthonormalize_rows: rows are linearly dependent");
    for (double& x : rows[k]) x /= nk;
  }
  return rows;
}

RotationBasis make_basis(const std::vector<std::vector<double>>& rows2, const std::vector<std::vector<double>>& rows3,
                         BasisMethod method) {
  RotationBasis b;
  b.method = method;
  b.R2 = rows_to_tensor(orthonormalize_rows(rows2));
  b.R3 = rows_to_tensor(orthonormalize_rows(rows3));
  if (b.R2.dim(1) != b.R3.dim(1)) throw std::invalid_argument("make_basis: per-order bases differ in dimension");
  return b;
}

RotationBasis build_basis(BasisMethod method, std::size_t l, const SttSet& stt, const BasisAux& aux) {
  const std::size_t n = stt.dim();
  if (l < 1 || l > n) throw std::invalid_argument("build_basis: latent dimension must be in 1..n");
  std::vector<std::vector<double>> rows2, rows3;
  std::vector<double> lam2, lam3;
  switch (method) {
    case BasisMethod::Cgt2TopL: {
      const auto eig = symmetric_eigen(second_order_cgt(stt.phi1));
      for (std::size_t k = 0; k < l; ++k) {
        rows2.push_back(eig.vectors[k]);
        lam2.push_back(eig.values[k]);
      }
      rows3 = rows2;
      lam3 = lam2;
      break;
    }
    case BasisMethod::Hocgt:
      if (stt.order < 3) throw std::invalid_argument("build_basis: hocgt needs third-order STTs");
      eigen_rows(hocgt_coeffs(stt, 3), l, aux.eigen, rows2, lam2);
      eigen_rows(hocgt_coeffs(stt, 4), l, aux.eigen, rows3, lam3);
      break;
    case BasisMethod::Scgt:
      if (!aux.selection) throw std::invalid_argument("build_basis: scgt needs a selection matrix");
      if (stt.order < 3) throw std::invalid_argument("build_basis: scgt needs third-order STTs");
      eigen_rows(scgt_coeffs(stt, *aux.selection, 3), l, aux.eigen, rows2, lam2);
      eigen_rows(scgt_coeffs(stt, *aux.selection, 4), l, aux.eigen, rows3, lam3);
      break;
    case BasisMethod::QcgtEnergy:
    case BasisMethod::QcgtApoapsis: {
      const char* want = method == BasisMethod::QcgtEnergy ? "energy" : "apoapsis";
      if (!aux.qoi || aux.qoi->kind != want)
        throw std::invalid_argument(std::string("build_basis: ") + to_string(method) + " needs " + want + " partials");
      if (stt.order < 3) throw std::invalid_argument("build_basis: qcgt needs third-order STTs");
      eigen_rows(qcgt_coeffs(stt, *aux.qoi, 3), l, aux.eigen, rows2, lam2);
      eigen_rows(qcgt_coeffs(stt, *aux.qoi, 4), l, aux.eigen, rows3, lam3);
      break;
    }
  }
  RotationBasis b = make_basis(rows2, rows3, method);
  b.t_start = stt.t_start;
  b.t_end = stt.t_end;
  b.lambda2 = std::move(lam2);
  b.lambda3 = std::move(lam3);
  return b;
}

DsttSet construct_dstt(const SttSet& stt, const RotationBasis& basis) {
  const std::size_t n = stt.dim();
  if (stt.order < 3) throw std::invalid_argument("construct_dstt: needs third-order STTs");
  if (basis.R2.dim(1) != n || basis.R3.dim(1) != n) throw std::invalid_argument("construct_dstt: basis dimension mismatch");
  const std::size_t l2 = basis.l2(), l3 = basis.l3();
  const auto& R2 = basis.R2;
  const auto& R3 = basis.R3;
  DsttSet d;
  d.t_start = stt.t_start;
  d.t_end = stt.t_end;
  d.phi1 = stt.phi1;
  d.basis = basis;

  d.psi2.reshape({n, l2, l2});
  std::vector<double> h(n * l2 * n, 0.0);  // h[i][g][b] = phi2[i][a][b] R2[g][a]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g = 0; g < l2; ++g)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += stt.phi2(i, a, b) * R2(g, a);
        h[(i * l2 + g) * n + b] = s;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g1 = 0; g1 < l2; ++g1)
      for (std::size_t g2 = 0; g2 < l2; ++g2) {
        double s = 0.0;
        for (std::size_t b = 0; b < n; ++b) s += h[(i * l2 + g1) * n + b] * R2(g2, b);
        d.psi2(i, g1, g2) = s;
      }

  d.psi3.reshape({n, l3, l3, l3});
  std::vector<double> h1(n * l3 * n * n, 0.0), h2(n * l3 * l3 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g = 0; g < l3; ++g)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t a = 0; a < n; ++a) s += stt.phi3(i, a, b, c) * R3(g, a);
          h1[((i * l3 + g) * n + b) * n + c] = s;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g1 = 0; g1 < l3; ++g1)
      for (std::size_t g2 = 0; g2 < l3; ++g2)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t b = 0; b < n; ++b) s += h1[((i * l3 + g1) * n + b) * n + c] * R3(g2, b);
          h2[((i * l3 + g1) * l3 + g2) * n + c] = s;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g1 = 0; g1 < l3; ++g1)
      for (std::size_t g2 = 0; g2 < l3; ++g2)
        for (std::size_t g3 = 0; g3 < l3; ++g3) {
          double s = 0.0;
          for (std::size_t c = 0; c < n; ++c) s += h2[((i * l3 + g1) * l3 + g2) * n + c] * R3(g3, c);
          d.psi3(i, g1, g2, g3) = s;
        }
  symmetrize_trailing2(d.psi2);
  symmetrize_trailing3(d.psi3);
  return d;
}

StateArray propagate_perturbation_dstt(const DsttSet& d, const StateArray& dx, int m) {
  if (m < 1 || m > 3) throw std::invalid_argument("propagate_perturbation_dstt: m must be 1..3");
  const std::size_t n = d.phi1.dim(0);
  const std::size_t l2 = d.basis.l2(), l3 = d.basis.l3();
  std::vector<double> y2(l2, 0.0), y3(l3, 0.0);
  for (std::size_t g = 0; g < l2; ++g)
    for (std::size_t a = 0; a < n; ++a) y2[g] += d.basis.R2(g, a) * dx[a];
  for (std::size_t g = 0; g < l3; ++g)
    for (std::size_t a = 0; a < n; ++a) y3[g] += d.basis.R3(g, a) * dx[a];
  StateArray out{};
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += d.phi1(i, a) * dx[a];
    if (m >= 2) {
      double s2 = 0.0;
      for (std::size_t g1 = 0; g1 < l2; ++g1)
        for (std::size_t g2 = 0; g2 < l2; ++g2) s2 += d.psi2(i, g1, g2) * y2[g1] * y2[g2];
      s += 0.5 * s2;
    }
    if (m >= 3) {
      double s3 = 0.0;
      for (std::size_t g1 = 0; g1 < l3; ++g1)
        for (std::size_t g2 = 0; g2 < l3; ++g2)
          for (std::size_t g3 = 0; g3 < l3; ++g3) s3 += d.psi3(i, g1, g2, g3) * y3[g1] * y3[g2] * y3[g3];
      s += s3 / 6.0;
    }
    out[i] = s;
  }
  return out;
}

Tensor reconstruct_phi2(const DsttSet& d) {
  const std::size_t n = d.phi1.dim(0), l = d.basis.l2();
  const auto& R = d.basis.R2;
  Tensor out({n, n, n});
  std::vector<double> h(n * l * n, 0.0);  // h[i][g][b] = psi2[i][g][k] R[k][b]
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g = 0; g < l; ++g)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t k = 0; k < l; ++k) s += d.psi2(i, g, k) * R(k, b);
        h[(i * l + g) * n + b] = s;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        double s = 0.0;
        for (std::size_t g = 0; g < l; ++g) s += R(g, a) * h[(i * l + g) * n + b];
        out(i, a, b) = s;
      }
  return out;
}

Tensor reconstruct_phi3(const DsttSet& d) {
  const std::size_t n = d.phi1.dim(0), l = d.basis.l3();
  const auto& R = d.basis.R3;
  Tensor out({n, n, n, n});
  std::vector<double> h1(n * l * l * n, 0.0), h2(n * l * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g1 = 0; g1 < l; ++g1)
      for (std::size_t g2 = 0; g2 < l; ++g2)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t k = 0; k < l; ++k) s += d.psi3(i, g1, g2, k) * R(k, c);
          h1[((i * l + g1) * l + g2) * n + c] = s;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t g1 = 0; g1 < l; ++g1)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t g2 = 0; g2 < l; ++g2) s += h1[((i * l + g1) * l + g2) * n + c] * R(g2, b);
          h2[((i * l + g1) * n + b) * n + c] = s;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          double s = 0.0;
          for (std::size_t g1 = 0; g1 < l; ++g1) s += R(g1, a) * h2[((i * l + g1) * n + b) * n + c];
          out(i, a, b, c) = s;
        }
  return out;
}

FrobeniusError frobenius_error(const SttSet& stt, const DsttSet& d) {
  if (std::abs(stt.t_start - d.t_start) > 1e-9 || std::abs(stt.t_end - d.t_end) > 1e-9)
    throw std::invalid_argument("frobenius_error: interval mismatch");
  FrobeniusError e;
  e.norm2 = frobenius_norm(stt.phi2);
  e.norm3 = frobenius_norm(stt.phi3);
  const Tensor r2 = stt.phi2 - reconstruct_phi2(d);
  const Tensor r3 = stt.phi3 - reconstruct_phi3(d);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  e.eps2 = e.norm2 > 0 ? frobenius_norm(r2) / e.norm2 : nan;
  e.eps3 = e.norm3 > 0 ? frobenius_norm(r3) / e.norm3 : nan;
  e.low_nonlinearity = !(e.norm2 > 0) || !(e.norm3 > 0);
  return e;
}

}  // namespace aerostt
