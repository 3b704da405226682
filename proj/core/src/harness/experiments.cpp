#include "aerostt/harness/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "aerostt/cgt.hpp"
#include "aerostt/harness/output.hpp"
#include "aerostt/serialization.hpp"
#include "aerostt/tensor_eigen.hpp"

namespace aerostt::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// |pred - (truth - nominal)| evaluated in extended precision.
long double error_norm(const StateArray& pred, const LdState& truth, const LdState& nominal) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < kStateDim; ++i) {
    const long double d = static_cast<long double>(pred[i]) - (truth[i] - nominal[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

LdState add(const LdState& x, const StateArray& dx) {
  LdState out = x;
  for (std::size_t i = 0; i < kStateDim; ++i) out[i] += dx[i];
  return out;
}

std::vector<double> random_unit(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  const double nv = norm(v);
  for (double& x : v) x /= nv;
  return v;
}

/// `count` orthonormal vectors orthogonal to unit v, by Gram-Schmidt on seeded random vectors.
std::vector<std::vector<double>> orthonormal_completion(const std::vector<double>& v, std::size_t count,
                                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> rows{v};
  while (rows.size() < count + 1) {
    std::vector<double> c(v.size());
    for (double& x : c) x = normal(rng);
    rows.push_back(c);
    try {
      rows = orthonormalize_rows(rows);
    } catch (const std::invalid_argument&) {
      rows.pop_back();
    }
  }
  return {rows.begin() + 1, rows.end()};
}

StateArray scaled(const std::vector<double>& d, double mag) {
  StateArray dx{};
  for (std::size_t i = 0; i < kStateDim; ++i) dx[i] = mag * d[i];
  return dx;
}

std::vector<double> linspace_log(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k)
    out.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * k / (n - 1)));
  return out;
}

double relative_frobenius(const Tensor& a, const Tensor& b) {
  const double nb = frobenius_norm(b);
  return frobenius_norm(a - b) / (nb > 0 ? nb : 1.0);
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(method_from_string(n));
  return out;
}

Tensor family_coeffs(AnalysisContext& ctx, const std::string& family, const SttSet& stt, const StateArray& x_end,
                     int order) {
  if (family == "hocgt") return hocgt_coeffs(stt, order);
  if (family == "scgt") return scgt_coeffs(stt, position_speed_fpa_selection(), order);
  if (family == "qcgt-energy")
    return qcgt_coeffs(stt, qoi_partials(x_end, QoiKind::Energy, order - 1, ctx.qoi_params()), order);
  if (family == "qcgt-apoapsis")
    return qcgt_coeffs(stt, qoi_partials(x_end, QoiKind::Apoapsis, order - 1, ctx.qoi_params()), order);
  throw std::invalid_argument("unknown tensor family " + family);
}

std::vector<std::string> vector_header(const std::string& prefix) {
  static const char* names[] = {"r", "theta", "phi", "V", "gamma", "psi", "zeta"};
  std::vector<std::string> out;
  for (const char* n : names) out.push_back(prefix + n);
  return out;
}

void append(std::vector<Cell>& row, const std::vector<double>& v) {
  for (std::size_t i = 0; i < kStateDim; ++i) row.emplace_back(i < v.size() ? v[i] : kNaN);
}

}  // namespace

// ---- reference ------------------------------------------------------------

ReferenceResult run_reference(AnalysisContext& ctx) {
  const auto& grid = ctx.reference();
  ReferenceResult r;
  r.times = grid.times;
  r.states = grid.states;
  for (const auto& s : grid.states) {
    r.energy.push_back(specific_energy(s.x, ctx.qoi_params()));
    double ra = kNaN;
    try {
      ra = apoapsis_radius(s.x, ctx.qoi_params());
    } catch (const DomainError&) {
    }
    r.apoapsis.push_back(ra);
    r.dynamic_pressure.push_back(dynamic_pressure(s, ctx.models()));
    r.accel_ratio.push_back(accel_ratio(s, ctx.models()));
  }
  return r;
}

std::pair<double, double> accel_ratio_window(const ReferenceResult& ref) {
  double lo = kNaN, hi = kNaN;
  for (std::size_t k = 0; k < ref.times.size(); ++k)
    if (ref.accel_ratio[k] > 1.0) {
      if (std::isnan(lo)) lo = ref.times[k];
      hi = ref.times[k];
    }
  return {lo, hi};
}

// ---- STT validation -------------------------------------------------------

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log10(x[k]), ly = std::log10(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SttValidationResult run_stt_validation(AnalysisContext& ctx) {
  const auto& cfg = ctx.config();
  const auto& p = ctx.params();
  const double tref = ctx.scales().time_ref;
  SttValidationResult res;
  res.segment_start = cfg.validation_start;
  res.segment_end = cfg.validation_start + cfg.validation_length;

  // Finite differences of the extended-precision flow over the segment.
  auto t_fd = Clock::now();
  IntegratorConfig oracle = cfg.integrator;
  oracle.rel_tol = oracle.abs_tol = cfg.oracle_tol;
  LdState x0;
  for (std::size_t i = 0; i < kStateDim; ++i) x0[i] = ctx.x0()[i];
  const long double ts = static_cast<long double>(res.segment_start) / tref;
  const long double te = static_cast<long double>(res.segment_end) / tref;
  const LdState xs = res.segment_start > cfg.t0
                         ? propagate_state_nd<long double>(x0, static_cast<long double>(cfg.t0) / tref, ts, p, oracle)
                         : x0;
  std::vector<long double> steps;
  propagate_state_nd<long double>(xs, ts, te, p, oracle, &steps);
  StateArray xs_d;
  for (std::size_t i = 0; i < kStateDim; ++i) xs_d[i] = static_cast<double>(xs[i]);
  const std::vector<double> seg{res.segment_start, res.segment_end};
  const SttSet stt = integrate_stts_nd<double>(xs_d, seg, tref, p, 3, DynamicsComponent::Full, cfg.integrator)[0];

  auto flow = [&](const std::array<long double, kStateDim>& dx) {
    LdState x = xs;
    for (std::size_t i = 0; i < kStateDim; ++i) x[i] += dx[i];
    return replay_state_nd<long double>(x, ts, steps, p);
  };
  constexpr std::size_t n = kStateDim;
  // Product of central differences along the listed axes, Richardson-extrapolated in h.
  auto mixed = [&](const std::vector<std::size_t>& axes, long double h) {
    auto one = [&](long double hh) {
      std::array<long double, n> acc{};
      const std::size_t m = axes.size();
      for (std::size_t mask = 0; mask < (1u << m); ++mask) {
        std::array<long double, n> dx{};
        long double sign = 1.0L;
        for (std::size_t k = 0; k < m; ++k) {
          const bool neg = mask & (1u << k);
          dx[axes[k]] += neg ? -hh : hh;
          if (neg) sign = -sign;
        }
        const auto f = flow(dx);
        for (std::size_t i = 0; i < n; ++i) acc[i] += sign * f[i];
      }
      const long double denom = std::pow(2.0L * hh, static_cast<long double>(m));
      for (auto& a : acc) a /= denom;
      return acc;
    };
    const auto d1 = one(h), d2 = one(h / 2);
    std::array<long double, n> out{};
    for (std::size_t i = 0; i < n; ++i) out[i] = (4.0L * d2[i] - d1[i]) / 3.0L;
    return out;
  };
  Tensor fd1({n, n}), fd2({n, n, n}), fd3({n, n, n, n});
  for (std::size_t a = 0; a < n; ++a) {
    const auto d = mixed({a}, 1e-5L);
    for (std::size_t i = 0; i < n; ++i) fd1(i, a) = static_cast<double>(d[i]);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const auto d = mixed({a, b}, 1e-4L);
      for (std::size_t i = 0; i < n; ++i) fd2(i, a, b) = fd2(i, b, a) = static_cast<double>(d[i]);
    }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        const auto d = mixed({a, b, c}, 1e-3L);
        const std::size_t perm[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
        for (std::size_t i = 0; i < n; ++i)
          for (const auto& q : perm) fd3(i, q[0], q[1], q[2]) = static_cast<double>(d[i]);
      }
  res.fd_rel_error = {relative_frobenius(fd1, stt.phi1), relative_frobenius(fd2, stt.phi2),
                      relative_frobenius(fd3, stt.phi3)};
  res.runtime_fd_s = seconds_since(t_fd);

  // Truncation error of the Taylor series over (t0, tf) against replayed truth.
  auto t_sc = Clock::now();
  const auto dir = random_unit(derive_seed(cfg.seed, "order-scaling"), n);
  res.magnitudes = linspace_log(1e-8, 1e-4, 9);
  {
    StateOf<Quad> xq;
    for (std::size_t i = 0; i < n; ++i) xq[i] = ctx.x0()[i];
    const Quad t0q = Quad(cfg.t0) / Quad(tref), tfq = Quad(cfg.tf) / Quad(tref);
    std::vector<Quad> qsteps;
    const StateOf<Quad> nominal = propagate_state_nd<Quad>(xq, t0q, tfq, p, oracle, &qsteps);
    const auto stt_q = replay_stts_nd<Quad>(xq, t0q, qsteps, p, 3, cfg.t0, cfg.tf);
    const StateOf<Quad> nominal_replay = replay_state_nd<Quad>(xq, t0q, qsteps, p);
    (void)nominal;
    for (double mag : res.magnitudes) {
      StateOf<Quad> dx, x = xq;
      for (std::size_t i = 0; i < n; ++i) {
        dx[i] = Quad(mag) * Quad(dir[i]);
        x[i] += dx[i];
      }
      const StateOf<Quad> truth = replay_state_nd<Quad>(x, t0q, qsteps, p);
      for (int m = 1; m <= 3; ++m) {
        const auto pred = propagate_perturbation_stt(stt_q, dx, m);
        Quad s = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const Quad d = pred[i] - (truth[i] - nominal_replay[i]);
          s += d * d;
        }
        res.taylor_errors[m - 1].push_back(std::sqrt(to_double(s)));
      }
    }
  }
  const SttSet& map = ctx.full_map();
  const LdState nominal = ctx.oracle_nominal().back();
  for (double mag : res.magnitudes) {
    const StateArray dx = scaled(dir, mag);
    const LdState truth = ctx.oracle_perturbed(dx).back();
    for (int m = 1; m <= 3; ++m)
      res.taylor_errors_double[m - 1].push_back(
          static_cast<double>(error_norm(propagate_perturbation_stt(map, dx, m), truth, nominal)));
  }
  for (int m = 0; m < 3; ++m) {
    res.slopes[m] = loglog_slope(res.magnitudes, res.taylor_errors[m]);
    res.slopes_double[m] = loglog_slope(res.magnitudes, res.taylor_errors_double[m]);
  }
  res.runtime_scaling_s = seconds_since(t_sc);

  // Composition against direct integration over the whole span.
  const std::vector<double> whole{cfg.t0, cfg.tf};
  const SttSet direct = integrate_stts(ctx.x0(), whole, 3, ctx.models(), cfg.integrator)[0];
  res.composition_rel_error = {relative_frobenius(map.phi1, direct.phi1), relative_frobenius(map.phi2, direct.phi2),
                               relative_frobenius(map.phi3, direct.phi3)};
  return res;
}

// ---- eigen studies --------------------------------------------------------

std::vector<MaximalityRow> run_maximality(AnalysisContext& ctx, const std::string& family) {
  const auto& cfg = ctx.config();
  const SttSet& map = ctx.full_map();
  const StateArray x_end = ctx.reference().states.back().x;
  const auto sym = symmetrize(family_coeffs(ctx, family, map, x_end, 3));
  const auto best = max_eigenpair(sym, cfg.eigen).best.v;
  std::vector<std::vector<double>> dirs{best};
  for (auto& c : orthonormal_completion(best, kStateDim - 1, derive_seed(cfg.seed, "maximality-" + family)))
    dirs.push_back(std::move(c));

  const LdState nominal = ctx.oracle_nominal().back();
  QoiParameters q = ctx.qoi_params();
  std::vector<MaximalityRow> rows;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const LdState truth = ctx.oracle_perturbed(scaled(dirs[k], cfg.perturbation_magnitude)).back();
    long double obj = 0.0L;
    if (family == "hocgt") {
      for (std::size_t i = 0; i < kStateDim; ++i) obj += (truth[i] - nominal[i]) * (truth[i] - nominal[i]);
      obj = std::sqrt(obj);
    } else if (family == "scgt") {
      const SelectionMatrix sel = position_speed_fpa_selection();
      for (std::size_t i : sel.rows()) obj += (truth[i] - nominal[i]) * (truth[i] - nominal[i]);
      obj = std::sqrt(obj);
    } else if (family == "qcgt-apoapsis") {
      obj = std::abs(apoapsis_radius(truth, q) - apoapsis_radius(nominal, q));
    } else {
      throw std::invalid_argument("maximality study supports hocgt, scgt and qcgt-apoapsis");
    }
    MaximalityRow r;
    r.family = family;
    r.direction = static_cast<int>(k);
    r.angle_deg = k == 0 ? 0.0 : vector_angle(dirs[k], best);
    r.objective = static_cast<double>(obj);
    r.d = dirs[k];
    rows.push_back(r);
  }
  for (auto& r : rows) r.relative = r.objective / rows.front().objective;
  return rows;
}

EigStudyResult run_eig_studies(AnalysisContext& ctx, bool families, bool maximality) {
  EigStudyResult res;
  const auto ref = run_reference(ctx);
  res.accel_window = accel_ratio_window(ref);
  const DynamicsComponent comps[3] = {DynamicsComponent::Full, DynamicsComponent::Conservative,
                                      DynamicsComponent::Dissipative};
  const std::size_t n_int = ctx.n_intervals();
  for (std::size_t k = 0; k < n_int; ++k) {
    DecomposedEigenRow row;
    row.t_start = ctx.times()[k];
    row.t_end = ctx.times()[k + 1];
    for (int c = 0; c < 3; ++c) {
      const auto eig = symmetric_eigen(second_order_cgt(ctx.interval_stts(comps[c])[k].phi1));
      row.v[c] = eig.vectors[0];
      row.lambda[c] = eig.values[0];
      row.step_angle[c] = k == 0 ? kNaN : vector_angle(row.v[c], res.decomposed.back().v[c]);
    }
    row.angle_dissipative_full = vector_angle(row.v[2], row.v[0]);
    row.angle_conservative_full = vector_angle(row.v[1], row.v[0]);
    row.max_accel_ratio = std::max(ref.accel_ratio[k], ref.accel_ratio[k + 1]);
    res.decomposed.push_back(std::move(row));
  }

  if (families) {
    const auto& cfg = ctx.config();
    std::vector<std::vector<double>> prev_top;  // candidates of the previous order-3 HOCGT
    for (std::size_t k = 0; k < n_int; ++k) {
      const SttSet& stt = ctx.interval_stts()[k];
      const StateArray x_end = ctx.reference().states[k + 1].x;
      for (const std::string family : {"hocgt", "scgt", "qcgt-energy"}) {
        for (int order = 2; order <= 4; ++order) {
          FamilyEigenRow r;
          r.t_start = ctx.times()[k];
          r.t_end = ctx.times()[k + 1];
          r.family = family;
          r.order = order;
          r.lambda2 = kNaN;
          try {
            const auto found = max_eigenpair(symmetrize(family_coeffs(ctx, family, stt, x_end, order)), cfg.eigen);
            r.lambda1 = found.best.lambda;
            if (found.candidates.size() > 1) r.lambda2 = found.candidates[1].lambda;
            r.v = found.best.v;
            normalize_sign(r.v);
            r.residual = found.best.relative_residual;
            r.converged = true;
            if (family == "hocgt" && order == 3) {
              if (!prev_top.empty()) {
                const double to_prev = vector_angle(found.best.v, prev_top[0]);
                for (std::size_t j = 1; j < prev_top.size(); ++j)
                  if (vector_angle(found.best.v, prev_top[j]) < to_prev) {
                    res.mode_switch_times.push_back(r.t_start);
                    break;
                  }
              }
              prev_top.clear();
              for (std::size_t j = 0; j < std::min<std::size_t>(2, found.candidates.size()); ++j)
                prev_top.push_back(found.candidates[j].v);
            }
          } catch (const std::exception& e) {
            r.lambda1 = kNaN;
            r.error = e.what();
          }
          res.families.push_back(std::move(r));
        }
      }
    }
  }
  if (maximality)
    for (const std::string family : {"hocgt", "scgt", "qcgt-apoapsis"})
      for (auto& r : run_maximality(ctx, family)) res.maximality.push_back(std::move(r));
  return res;
}

// ---- direction study ------------------------------------------------------

DirectionStudyResult run_direction_study(AnalysisContext& ctx) {
  const auto& cfg = ctx.config();
  DirectionStudyResult res;
  const auto found = max_eigenpair(symmetrize(hocgt_coeffs(ctx.full_map(), 3)), cfg.eigen);
  res.r2 = found.best.v;
  normalize_sign(res.r2);
  res.u = orthonormal_completion(res.r2, 1, derive_seed(cfg.seed, "direction-study"))[0];
  const RotationBasis basis = make_basis({res.r2}, {res.r2}, BasisMethod::Hocgt);

  const std::size_t n_int = ctx.n_intervals();
  res.times.assign(ctx.times().begin() + 1, ctx.times().end());
  const int na = cfg.direction_angles;
  res.errors.assign(3, std::vector<std::vector<double>>(static_cast<std::size_t>(na), std::vector<double>(n_int)));
  std::vector<DsttSet> dstts;
  for (std::size_t k = 1; k <= n_int; ++k) dstts.push_back(construct_dstt(ctx.map_from_start(k), basis));
  const auto& nominal = ctx.oracle_nominal();

  for (int j = 0; j < na; ++j) {
    const double kappa = 90.0 * j / (na - 1);
    res.kappa_deg.push_back(kappa);
    // Exact endpoints so that kappa = 90 deg has no component along R2 beyond rounding of u.
    const double c = j == na - 1 ? 0.0 : std::cos(kappa * kPi / 180.0);
    const double s = j == 0 ? 0.0 : (j == na - 1 ? 1.0 : std::sin(kappa * kPi / 180.0));
    StateArray dx{};
    for (std::size_t i = 0; i < kStateDim; ++i) dx[i] = cfg.perturbation_magnitude * (c * res.r2[i] + s * res.u[i]);
    const auto truth = ctx.oracle_perturbed(dx);
    for (std::size_t k = 1; k <= n_int; ++k) {
      const SttSet& map = ctx.map_from_start(k);
      const auto ju = static_cast<std::size_t>(j);
      res.errors[0][ju][k - 1] = static_cast<double>(error_norm(propagate_perturbation_stt(map, dx, 1), truth[k], nominal[k]));
      res.errors[1][ju][k - 1] = static_cast<double>(error_norm(propagate_perturbation_stt(map, dx, 2), truth[k], nominal[k]));
      res.errors[2][ju][k - 1] =
          static_cast<double>(error_norm(propagate_perturbation_dstt(dstts[k - 1], dx, 2), truth[k], nominal[k]));
    }
  }
  return res;
}

// ---- Frobenius sweep ------------------------------------------------------

std::vector<FrobeniusRow> run_frobenius(AnalysisContext& ctx, const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (Method m : parse_methods(names))
    if (is_dstt(m) && m != Method::RaQDstt) methods.push_back(m);
  std::vector<FrobeniusRow> rows;
  for (std::size_t k = 0; k < ctx.n_intervals(); ++k) {
    const SttSet& stt = ctx.interval_stts()[k];
    const StateArray x_end = ctx.reference().states[k + 1].x;
    for (Method m : methods) {
      FrobeniusRow r;
      r.t_start = stt.t_start;
      r.t_end = stt.t_end;
      r.method = to_string(m);
      try {
        const auto fe = frobenius_error(stt, construct_dstt(stt, ctx.basis_for(m, stt, x_end)));
        r.eps2 = fe.eps2;
        r.eps3 = fe.eps3;
        r.norm2 = fe.norm2;
        r.norm3 = fe.norm3;
        r.low_nonlinearity = fe.low_nonlinearity;
      } catch (const std::runtime_error&) {
        r.eps2 = r.eps3 = kNaN;
        r.norm2 = frobenius_norm(stt.phi2);
        r.norm3 = frobenius_norm(stt.phi3);
      }
      rows.push_back(r);
    }
  }
  return rows;
}

// ---- Monte Carlo ----------------------------------------------------------

const MonteCarloMethodResult& MonteCarloResult::at(const std::string& method) const {
  for (const auto& m : methods)
    if (m.method == method) return m;
  throw std::out_of_range("no Monte Carlo results for method " + method);
}

MonteCarloResult run_monte_carlo(AnalysisContext& ctx, int samples, std::uint64_t seed,
                                 const std::vector<std::string>& names, bool energy_history) {
  if (samples < 0) throw std::invalid_argument("run_monte_carlo: negative sample count");
  const auto t_start = Clock::now();
  const auto methods = parse_methods(names);
  MonteCarloResult res;
  res.samples = samples;
  res.seed = seed;
  for (Method m : methods) res.methods.push_back({to_string(m), {}, {}, {}, {}, 0, {}});
  if (samples == 0) {
    res.runtime_s = seconds_since(t_start);
    return res;
  }

  const StateArray sigma = initial_sigma(ctx.config());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < samples; ++s) {
    StateArray dx;
    for (std::size_t i = 0; i < kStateDim; ++i) dx[i] = sigma[i] * normal(rng);
    res.perturbations.push_back(dx);
  }

  const double e_scale = ctx.scales().speed_ref * ctx.scales().speed_ref;  // J/kg
  const double r_scale = ctx.scales().length_ref / 1e3;                      // km
  const QoiParameters& q = ctx.qoi_params();
  const std::size_t n_int = ctx.n_intervals();
  const SttSet& map = ctx.full_map();
  const StateArray x_end = ctx.reference().states.back().x;
  std::vector<TaylorModel> models;
  for (Method m : methods) models.push_back(ctx.model_for(m, map, x_end));
  const auto& nominal = ctx.oracle_nominal();
  const LdState& nom_f = nominal.back();

  std::vector<std::vector<LdState>> truths;
  for (int s = 0; s < samples; ++s) {
    auto states = ctx.oracle_perturbed(res.perturbations[static_cast<std::size_t>(s)]);
    const LdState& truth = states.back();
    const long double e_true = specific_energy(truth, q);
    long double ra_true = std::numeric_limits<long double>::quiet_NaN();
    try {
      ra_true = apoapsis_radius(truth, q);
    } catch (const NotCapturedError&) {
      ++res.truth_not_captured;
    }
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      auto& out = res.methods[mi];
      const LdState pred = add(nom_f, models[mi].apply(res.perturbations[static_cast<std::size_t>(s)]));
      out.energy_error.push_back(static_cast<double>(std::abs(specific_energy(pred, q) - e_true)) * e_scale);
      double ra_err = kNaN;
      if (!std::isnan(static_cast<double>(ra_true))) {
        try {
          ra_err = static_cast<double>(std::abs(apoapsis_radius(pred, q) - ra_true)) * r_scale;
        } catch (const NotCapturedError&) {
          ++out.prediction_not_captured;
        }
      }
      out.apoapsis_error.push_back(ra_err);
    }
    if (energy_history) truths.push_back(std::move(states));
  }
  for (auto& m : res.methods) {
    m.energy_stats = box_stats(m.energy_error);
    m.apoapsis_stats = box_stats(m.apoapsis_error);
  }

  if (energy_history) {
    res.history_times.assign(ctx.times().begin() + 1, ctx.times().end());
    for (auto& m : res.methods) m.energy_history.assign(n_int, kNaN);
    for (std::size_t k = 1; k <= n_int; ++k) {
      const SttSet& mk = ctx.map_from_start(k);
      const StateArray xk = ctx.reference().states[k].x;
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (methods[mi] == Method::RaQDstt) continue;  // apoapsis is undefined before capture
        TaylorModel model;
        try {
          model = ctx.model_for(methods[mi], mk, xk);
        } catch (const std::runtime_error&) {
          continue;
        }
        long double sum = 0.0L;
        for (int s = 0; s < samples; ++s) {
          const auto su = static_cast<std::size_t>(s);
          const LdState pred = add(nominal[k], model.apply(res.perturbations[su]));
          sum += std::abs(specific_energy(pred, q) - specific_energy(truths[su][k], q));
        }
        res.methods[mi].energy_history[k - 1] = static_cast<double>(sum / samples) * e_scale;
      }
    }
  }
  res.runtime_s = seconds_since(t_start);
  return res;
}

// ---- file-writing commands -------------------------------------------------

nlohmann::json cmd_reference(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto r = run_reference(ctx);
  const Scales& sc = ctx.scales();
  const double e_scale = sc.speed_ref * sc.speed_ref;
  CsvWriter traj(out / "reference_trajectory.csv", ctx.hash(),
                 {"t_s", "r_m", "theta_rad", "phi_rad", "V_mps", "gamma_rad", "psi_rad", "zeta_lnkgpm3",
                  "altitude_km", "energy_Jpkg", "apoapsis_km"});
  CsvWriter loads(out / "reference_loads.csv", ctx.hash(), {"t_s", "dynamic_pressure_Pa", "accel_ratio"});
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const StateVector d = sc.redimensionalize(r.states[k]);
    std::vector<Cell> row{r.times[k]};
    for (std::size_t i = 0; i < kStateDim; ++i) row.emplace_back(d[i]);
    row.emplace_back((d[kR] - ctx.models().planet.radius) / 1e3);
    row.emplace_back(r.energy[k] * e_scale);
    row.emplace_back(r.apoapsis[k] * sc.length_ref / 1e3);
    traj.row(row);
    loads.row({r.times[k], r.dynamic_pressure[k], r.accel_ratio[k]});
  }
  bool monotone = true;
  for (std::size_t k = 1; k < r.energy.size(); ++k) monotone = monotone && r.energy[k] <= r.energy[k - 1] + 1e-12;
  const auto window = accel_ratio_window(r);
  double pd_max = 0.0, t_pd_max = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k)
    if (r.dynamic_pressure[k] > pd_max) {
      pd_max = r.dynamic_pressure[k];
      t_pd_max = r.times[k];
    }
  const StateVector x0d = sc.redimensionalize(r.states.front());
  nlohmann::json j = {
      {"command", "reference"},
      {"config_hash", ctx.hash()},
      {"initial_relative_speed_mps", x0d[kV]},
      {"initial_relative_flight_path_deg", x0d[kGamma] * 180.0 / kPi},
      {"energy_initial_Jpkg", r.energy.front() * e_scale},
      {"energy_final_Jpkg", r.energy.back() * e_scale},
      {"energy_monotone_nonincreasing", monotone},
      {"captured", !std::isnan(r.apoapsis.back())},
      {"final_apoapsis_km", r.apoapsis.back() * sc.length_ref / 1e3},
      {"max_dynamic_pressure_Pa", pd_max},
      {"time_of_max_dynamic_pressure_s", t_pd_max},
      {"accel_ratio_above_one_s", {window.first, window.second}},
      {"files", {"reference_trajectory.csv", "reference_loads.csv"}},
  };
  write_json(out / "reference_summary.json", j);
  return j;
}

nlohmann::json cmd_stt_validate(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto r = run_stt_validation(ctx);
  CsvWriter fd(out / "stt_fd_check.csv", ctx.hash(), {"order", "t_start_s", "t_end_s", "rel_frobenius_error"});
  for (int m = 0; m < 3; ++m) fd.row({static_cast<long long>(m + 1), r.segment_start, r.segment_end, r.fd_rel_error[m]});
  CsvWriter sc(out / "stt_order_scaling.csv", ctx.hash(), {"magnitude_nd", "order", "map", "error_norm_nd"});
  for (std::size_t k = 0; k < r.magnitudes.size(); ++k)
    for (int m = 0; m < 3; ++m) {
      sc.row({r.magnitudes[k], static_cast<long long>(m + 1), std::string("quad-replay"), r.taylor_errors[m][k]});
      sc.row({r.magnitudes[k], static_cast<long long>(m + 1), std::string("double-composed"), r.taylor_errors_double[m][k]});
    }
  CsvWriter comp(out / "stt_composition.csv", ctx.hash(), {"order", "rel_frobenius_error"});
  for (int m = 0; m < 3; ++m) comp.row({static_cast<long long>(m + 1), r.composition_rel_error[m]});
  write_json(out / "stt_full_map.json", stt_to_json(ctx.full_map()));
  nlohmann::json j = {{"command", "stt-validate"},
                      {"config_hash", ctx.hash()},
                      {"segment_s", {r.segment_start, r.segment_end}},
                      {"fd_rel_error", r.fd_rel_error},
                      {"order_scaling_slopes", r.slopes},
                      {"order_scaling_slopes_double_map", r.slopes_double},
                      {"composition_rel_error", r.composition_rel_error},
                      {"runtime_fd_s", r.runtime_fd_s},
                      {"runtime_scaling_s", r.runtime_scaling_s},
                      {"files", {"stt_fd_check.csv", "stt_order_scaling.csv", "stt_composition.csv", "stt_full_map.json"}}};
  write_json(out / "stt_validate_summary.json", j);
  return j;
}

nlohmann::json cmd_eig_studies(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto r = run_eig_studies(ctx);
  auto h = std::vector<std::string>{"t_start_s", "t_end_s", "component", "lambda"};
  for (auto& c : vector_header("v_")) h.push_back(c);
  h.push_back("step_angle_deg");
  h.push_back("angle_to_full_deg");
  h.push_back("max_accel_ratio");
  CsvWriter dec(out / "eig_decomposed.csv", ctx.hash(), h);
  const char* comp[3] = {"full", "conservative", "dissipative"};
  double max_diss_angle = 0.0, max_cons_zeta = 0.0, max_cons_step = 0.0, full_spread = 0.0;
  for (std::size_t a = 0; a < r.decomposed.size(); ++a) {
    if (a > 0) max_cons_step = std::max(max_cons_step, r.decomposed[a].step_angle[1]);
    if (r.decomposed[a].max_accel_ratio <= 1.0) continue;
    for (std::size_t b = a + 1; b < r.decomposed.size(); ++b)
      if (r.decomposed[b].max_accel_ratio > 1.0)
        full_spread = std::max(full_spread, vector_angle(r.decomposed[a].v[0], r.decomposed[b].v[0]));
  }
  for (const auto& row : r.decomposed) {
    for (int c = 0; c < 3; ++c) {
      std::vector<Cell> cells{row.t_start, row.t_end, std::string(comp[c]), row.lambda[c]};
      append(cells, row.v[c]);
      cells.emplace_back(row.step_angle[c]);
      cells.emplace_back(c == 0 ? 0.0 : (c == 1 ? row.angle_conservative_full : row.angle_dissipative_full));
      cells.emplace_back(row.max_accel_ratio);
      dec.row(cells);
    }
    max_diss_angle = std::max(max_diss_angle, row.angle_dissipative_full);
    max_cons_zeta = std::max(max_cons_zeta, std::abs(row.v[1][kZeta]));
  }
  auto hf = std::vector<std::string>{"t_k_s", "t_k1_s", "method", "order", "lambda_1", "lambda_2"};
  for (auto& c : vector_header("v_")) hf.push_back(c);
  hf.push_back("residual");
  CsvWriter fam(out / "eig_families.csv", ctx.hash(), hf);
  for (const auto& row : r.families) {
    std::vector<Cell> cells{row.t_start, row.t_end, row.family, static_cast<long long>(row.order), row.lambda1, row.lambda2};
    append(cells, row.v);
    cells.emplace_back(row.converged ? row.residual : kNaN);
    fam.row(cells);
  }
  auto hm = std::vector<std::string>{"method", "direction", "angle_from_maximal_deg", "objective_nd", "relative_objective"};
  for (auto& c : vector_header("d_")) hm.push_back(c);
  CsvWriter mx(out / "eig_maximality.csv", ctx.hash(), hm);
  nlohmann::json ratios = nlohmann::json::object();
  for (const auto& row : r.maximality) {
    std::vector<Cell> cells{row.family, static_cast<long long>(row.direction), row.angle_deg, row.objective, row.relative};
    append(cells, row.d);
    mx.row(cells);
    if (row.direction > 0) {
      const double runner_up = ratios.value(row.family, 0.0);
      ratios[row.family] = std::max(runner_up, row.relative);
    }
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& row : r.families)
    if (!row.converged) failures.push_back({{"t_start_s", row.t_start}, {"method", row.family}, {"order", row.order}, {"error", row.error}});
  nlohmann::json j = {{"command", "eig-studies"},
                      {"config_hash", ctx.hash()},
                      {"max_conservative_zeta_component", max_cons_zeta},
                      {"max_angle_dissipative_vs_full_deg", max_diss_angle},
                      {"max_conservative_step_deg", max_cons_step},
                      {"full_direction_spread_in_accel_window_deg", full_spread},
                      {"accel_ratio_above_one_s", {r.accel_window.first, r.accel_window.second}},
                      {"mode_switch_times_s", r.mode_switch_times},
                      {"maximality_largest_completion_relative", ratios},
                      {"eigen_failures", failures},
                      {"files", {"eig_decomposed.csv", "eig_families.csv", "eig_maximality.csv"}}};
  write_json(out / "eig_studies_summary.json", j);
  return j;
}

nlohmann::json cmd_direction_study(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto r = run_direction_study(ctx);
  CsvWriter csv(out / "direction_study.csv", ctx.hash(), {"kappa_deg", "t_s", "method", "error_norm_nd"});
  for (std::size_t j = 0; j < r.kappa_deg.size(); ++j)
    for (std::size_t k = 0; k < r.times.size(); ++k)
      for (std::size_t m = 0; m < r.methods.size(); ++m) csv.row({r.kappa_deg[j], r.times[k], r.methods[m], r.errors[m][j][k]});
  bool ho_le_stm = true, stt2_le = true;
  const std::size_t last = r.times.size() - 1;
  for (std::size_t j = 0; j < r.kappa_deg.size(); ++j) {
    ho_le_stm = ho_le_stm && r.errors[2][j][last] <= r.errors[0][j][last];
    stt2_le = stt2_le && r.errors[1][j][last] <= std::min(r.errors[0][j][last], r.errors[2][j][last]);
  }
  nlohmann::json j = {{"command", "direction-study"},
                      {"config_hash", ctx.hash()},
                      {"perturbation_magnitude_nd", ctx.config().perturbation_magnitude},
                      {"R2", r.r2},
                      {"u", r.u},
                      {"final_hoDSTT_le_STM_all_angles", ho_le_stm},
                      {"final_STT2_le_others_all_angles", stt2_le},
                      {"files", {"direction_study.csv"}}};
  write_json(out / "direction_study_summary.json", j);
  return j;
}

nlohmann::json cmd_frobenius(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto rows = run_frobenius(ctx, ctx.config().methods);
  CsvWriter csv(out / "frobenius.csv", ctx.hash(),
                {"t_k_s", "t_k1_s", "method", "eps2", "eps3", "phi2_norm_nd", "phi3_norm_nd", "low_nonlinearity"});
  std::map<std::string, std::pair<double, int>> mean2;
  for (const auto& r : rows) {
    csv.row({r.t_start, r.t_end, r.method, r.eps2, r.eps3, r.norm2, r.norm3, static_cast<long long>(r.low_nonlinearity)});
    if (std::isfinite(r.eps2)) {
      mean2[r.method].first += r.eps2;
      mean2[r.method].second += 1;
    }
  }
  nlohmann::json means = nlohmann::json::object();
  for (const auto& [m, s] : mean2) means[m] = s.first / s.second;
  nlohmann::json j = {{"command", "frobenius"},
                      {"config_hash", ctx.hash()},
                      {"mean_eps2", means},
                      {"files", {"frobenius.csv"}}};
  write_json(out / "frobenius_summary.json", j);
  return j;
}

nlohmann::json cmd_monte_carlo(AnalysisContext& ctx, const std::filesystem::path& out) {
  const auto& cfg = ctx.config();
  const auto r = run_monte_carlo(ctx, cfg.monte_carlo.samples, derive_seed(cfg.seed, "monte-carlo"), cfg.methods,
                                 cfg.monte_carlo.energy_history);
  CsvWriter csv(out / "monte_carlo_samples.csv", ctx.hash(),
                {"sample", "method", "energy_error_Jpkg", "apoapsis_error_km"});
  for (int s = 0; s < r.samples; ++s)
    for (const auto& m : r.methods) {
      const auto su = static_cast<std::size_t>(s);
      csv.row({static_cast<long long>(s), m.method, m.energy_error[su], m.apoapsis_error[su]});
    }
  nlohmann::json files = {"monte_carlo_samples.csv"};
  if (!r.history_times.empty()) {
    CsvWriter hist(out / "energy_history.csv", ctx.hash(), {"t_s", "method", "mean_energy_error_Jpkg"});
    for (std::size_t k = 0; k < r.history_times.size(); ++k)
      for (const auto& m : r.methods) hist.row({r.history_times[k], m.method, m.energy_history[k]});
    files.push_back("energy_history.csv");
  }
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& m : r.methods)
    stats[m.method] = {{"energy_error_Jpkg", to_json(m.energy_stats)},
                       {"apoapsis_error_km", to_json(m.apoapsis_stats)},
                       {"prediction_not_captured", m.prediction_not_captured}};
  nlohmann::json j = {{"command", "monte-carlo"},
                      {"config_hash", ctx.hash()},
                      {"samples", r.samples},
                      {"seed", r.seed},
                      {"sigma_nd", initial_sigma(cfg)},
                      {"truth_not_captured", r.truth_not_captured},
                      {"methods", stats},
                      {"runtime_s", r.runtime_s},
                      {"files", files}};
  write_json(out / "monte_carlo_summary.json", j);
  return j;
}

}  // namespace aerostt::harness
