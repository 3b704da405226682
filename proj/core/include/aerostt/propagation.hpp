#pragma once

// Reference trajectory integration, state transition tensors (STTs) up to third
// order, their algebraic composition, and Taylor-series perturbation mapping.
//
// Tensor layout is row-major: phi1(i, a), phi2(i, a, b), phi3(i, a, b, c), where
// i indexes the final state and a, b, c the initial state.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "aerostt/dynamics.hpp"
#include "aerostt/integrator.hpp"
#include "aerostt/models.hpp"
#include "aerostt/tensor.hpp"

namespace aerostt {

/// Reference states on an ascending time grid. Times are in seconds, states nondimensional.
struct TrajectoryGrid {
  std::vector<double> times;
  std::vector<StateVector> states;
  double grid_step = 0.0;

  std::size_t size() const { return times.size(); }
};

/// Solution-flow partials over (t_start, t_end), times in seconds.
template <class T>
struct BasicSttSet {
  double t_start = 0.0;
  double t_end = 0.0;
  int order = 1;
  BasicTensor<T> phi1;
  BasicTensor<T> phi2;
  BasicTensor<T> phi3;

  std::size_t dim() const { return phi1.dim(0); }
};
using SttSet = BasicSttSet<double>;

template <class T>
BasicSttSet<T> identity_stt(int order, double t = 0.0, std::size_t n = kStateDim) {
  if (order < 1 || order > 3) throw std::invalid_argument("identity_stt: order must be 1..3");
  BasicSttSet<T> s;
  s.t_start = s.t_end = t;
  s.order = order;
  s.phi1 = identity_matrix<T>(n);
  if (order >= 2) s.phi2.reshape({n, n, n});
  if (order >= 3) s.phi3.reshape({n, n, n, n});
  return s;
}

/// Uniform grid t0, t0 + dt, ..., always ending exactly at tf.
std::vector<double> uniform_grid(double t0, double tf, double dt);

/// Reference state and variational equations integrated as one augmented system:
/// 7 state equations followed by 49, 343 and 2401 STT equations for orders 1..3.
/// The state follows the full dynamics; the STTs follow the selected component.
template <class T>
class VariationalSystem {
 public:
  static constexpr std::size_t n = kStateDim;

  VariationalSystem(const DynamicsParameters& p, int order, DynamicsComponent which)
      : p_(p), order_(order), which_(which) {
    if (order < 0 || order > 3) throw std::invalid_argument("VariationalSystem: order must be 0..3");
    u_.assign(n * n * n, T(0));
    w1_.assign(n * n * n * n, T(0));
    w2_.assign(n * n * n * n, T(0));
  }

  static std::size_t size_for(int order) {
    std::size_t s = n;
    if (order >= 1) s += n * n;
    if (order >= 2) s += n * n * n;
    if (order >= 3) s += n * n * n * n;
    return s;
  }
  std::size_t size() const { return size_for(order_); }
  int order() const { return order_; }

  /// Writes x followed by identity/zero STTs.
  void initial_conditions(const StateOf<T>& x, std::vector<T>& y) const {
    y.assign(size(), T(0));
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i];
    if (order_ >= 1)
      for (std::size_t i = 0; i < n; ++i) y[n + i * n + i] = T(1);
  }

  void operator()(const T& /*t*/, const std::vector<T>& y, std::vector<T>& dy) {
    StateOf<T> x;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i];
    if (order_ == 0) {
      const auto f = eom(x, p_);
      for (std::size_t i = 0; i < n; ++i) dy[i] = f[i];
      return;
    }
    const auto jets = eom_split(seed_jets(x), p_);
    const auto full = jets.full();
    for (std::size_t i = 0; i < n; ++i) dy[i] = full[i].v;
    if (which_ == DynamicsComponent::Full) unpack_jets(full, order_, partials_);
    else unpack_jets(jets.component(which_), order_, partials_);
    rhs_stts(y.data() + n, dy.data() + n);
  }

 private:
  void rhs_stts(const T* phi, T* dphi) {
    const auto& A = partials_.A;
    const T* p1 = phi;
    T* d1 = dphi;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a) {
        T s(0);
        for (std::size_t k = 0; k < n; ++k) s += A(i, k) * p1[k * n + a];
        d1[i * n + a] = s;
      }
    if (order_ < 2) return;

    const auto& B = partials_.B;
    const T* p2 = p1 + n * n;
    T* d2 = d1 + n * n;
    // u[i][a][b] = B[i][k][b] * phi1[k][a]
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          T s(0);
          for (std::size_t k = 0; k < n; ++k) s += B(i, k, b) * p1[k * n + a];
          u_[(i * n + a) * n + b] = s;
        }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
          T s(0);
          for (std::size_t k = 0; k < n; ++k) {
            s += A(i, k) * p2[(k * n + a) * n + b];
            s += u_[(i * n + a) * n + k] * p1[k * n + b];
          }
          d2[(i * n + a) * n + b] = s;
          d2[(i * n + b) * n + a] = s;
        }
    if (order_ < 3) return;

    const auto& C = partials_.C;
    const T* p3 = p2 + n * n * n;
    T* d3 = d2 + n * n * n;
    // w1[i][a][k][l] = C[i][m][k][l] phi1[m][a]; w2[i][a][b][l] = w1[i][a][k][l] phi1[k][b]
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = k; l < n; ++l) {
            T s(0);
            for (std::size_t m = 0; m < n; ++m) s += C(i, m, k, l) * p1[m * n + a];
            w1_[((i * n + a) * n + k) * n + l] = s;
            w1_[((i * n + a) * n + l) * n + k] = s;
          }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
          for (std::size_t l = 0; l < n; ++l) {
            T s(0);
            for (std::size_t k = 0; k < n; ++k) s += w1_[((i * n + a) * n + k) * n + l] * p1[k * n + b];
            w2_[((i * n + a) * n + b) * n + l] = s;
            w2_[((i * n + b) * n + a) * n + l] = s;
          }
    auto X = [&](std::size_t i, std::size_t a, std::size_t b, std::size_t c) {
      T s(0);
      for (std::size_t k = 0; k < n; ++k) s += u_[(i * n + a) * n + k] * p2[(k * n + b) * n + c];
      return s;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
          for (std::size_t c = b; c < n; ++c) {
            T s = X(i, a, b, c) + X(i, b, a, c) + X(i, c, a, b);
            for (std::size_t k = 0; k < n; ++k) {
              s += A(i, k) * p3[((k * n + a) * n + b) * n + c];
              s += w2_[((i * n + a) * n + b) * n + k] * p1[k * n + c];
            }
            const std::size_t perm[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
            for (const auto& q : perm) d3[((i * n + q[0]) * n + q[1]) * n + q[2]] = s;
          }
  }

  DynamicsParameters p_;
  int order_;
  DynamicsComponent which_;
  BasicDynamicsPartials<T> partials_;
  std::vector<T> u_, w1_, w2_;
};

/// Copies the STT block of an augmented state vector into an SttSet.
template <class T>
BasicSttSet<T> unpack_stt(const std::vector<T>& y, int order, double t_start, double t_end) {
  constexpr std::size_t n = kStateDim;
  BasicSttSet<T> s = identity_stt<T>(order, t_start, n);
  s.t_end = t_end;
  std::size_t off = n;
  for (std::size_t k = 0; k < n * n; ++k) s.phi1(k) = y[off + k];
  off += n * n;
  if (order >= 2) {
    for (std::size_t k = 0; k < n * n * n; ++k) s.phi2(k) = y[off + k];
    off += n * n * n;
  }
  if (order >= 3)
    for (std::size_t k = 0; k < n * n * n * n; ++k) s.phi3(k) = y[off + k];
  return s;
}

/// Integrates the augmented system across consecutive grid intervals, restarting
/// the STTs from identity at every grid time. `times` are in seconds; `x0` is the
/// nondimensional state at times.front(). Optionally returns the reference states.
template <class T>
std::vector<BasicSttSet<T>> integrate_stts_nd(const StateOf<T>& x0, std::span<const double> times,
                                              double time_ref, const DynamicsParameters& p, int order,
                                              DynamicsComponent which, const IntegratorConfig& cfg,
                                              std::vector<StateOf<T>>* states = nullptr) {
  if (order < 1 || order > 3) throw std::invalid_argument("integrate_stts: order must be 1..3");
  if (times.size() < 2) throw std::invalid_argument("integrate_stts: need at least two grid times");
  VariationalSystem<T> sys(p, order, which);
  Dop853<T> stepper(sys.size(), cfg);
  std::vector<T> y;
  sys.initial_conditions(x0, y);
  std::vector<BasicSttSet<T>> out;
  out.reserve(times.size() - 1);
  if (states) {
    states->clear();
    states->push_back(x0);
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (!(times[k + 1] > times[k])) throw std::invalid_argument("integrate_stts: times must increase");
    const T ta = T(times[k] / time_ref), tb = T(times[k + 1] / time_ref);
    stepper.integrate(sys, ta, tb, y);
    out.push_back(unpack_stt(y, order, times[k], times[k + 1]));
    StateOf<T> x;
    for (std::size_t i = 0; i < kStateDim; ++i) x[i] = y[i];
    if (states) states->push_back(x);
    sys.initial_conditions(x, y);
  }
  return out;
}

/// Advances a nondimensional state over nondimensional time; records accepted steps if asked.
template <class T>
StateOf<T> propagate_state_nd(const StateOf<T>& x0, T t0, T t1, const DynamicsParameters& p,
                              const IntegratorConfig& cfg, std::vector<T>* steps = nullptr) {
  VariationalSystem<T> sys(p, 0, DynamicsComponent::Full);
  Dop853<T> stepper(kStateDim, cfg);
  std::vector<T> y(x0.begin(), x0.end());
  stepper.record_steps(steps != nullptr);
  stepper.integrate(sys, t0, t1, y);
  if (steps) *steps = stepper.recorded_steps();
  StateOf<T> out;
  for (std::size_t i = 0; i < kStateDim; ++i) out[i] = y[i];
  return out;
}

/// Re-runs a recorded step sequence from a (perturbed) initial state. Differences
/// between replays of nearby initial states are free of step-selection noise.
template <class T>
StateOf<T> replay_state_nd(const StateOf<T>& x0, T t0, std::span<const T> steps, const DynamicsParameters& p) {
  VariationalSystem<T> sys(p, 0, DynamicsComponent::Full);
  Dop853<T> stepper(kStateDim, IntegratorConfig{});
  std::vector<T> y(x0.begin(), x0.end());
  stepper.replay(sys, t0, steps, y);
  StateOf<T> out;
  for (std::size_t i = 0; i < kStateDim; ++i) out[i] = y[i];
  return out;
}

/// STTs of the discrete flow defined by a recorded step sequence. Fixed-step
/// Runge-Kutta commutes with differentiation, so these are the exact derivatives
/// of replay_state_nd over the same steps (up to rounding).
template <class T>
BasicSttSet<T> replay_stts_nd(const StateOf<T>& x0, T t0, std::span<const T> steps, const DynamicsParameters& p,
                              int order, double t_start, double t_end) {
  if (order < 1 || order > 3) throw std::invalid_argument("replay_stts: order must be 1..3");
  VariationalSystem<T> sys(p, order, DynamicsComponent::Full);
  Dop853<T> stepper(sys.size(), IntegratorConfig{});
  std::vector<T> y;
  sys.initial_conditions(x0, y);
  stepper.replay(sys, t0, steps, y);
  return unpack_stt(y, order, t_start, t_end);
}

/// Chain rule for flows: returns the STT over (ab.t_start, bc.t_end).
template <class T>
BasicSttSet<T> compose_stts(const BasicSttSet<T>& ab, const BasicSttSet<T>& bc, double time_tol = 1e-9) {
  using std::abs;
  if (std::abs(ab.t_end - bc.t_start) > time_tol * std::max(1.0, std::abs(ab.t_end)))
    throw std::invalid_argument("compose_stts: interval mismatch");
  const int order = std::min(ab.order, bc.order);
  const std::size_t n = ab.dim();
  if (bc.dim() != n) throw std::invalid_argument("compose_stts: dimension mismatch");
  BasicSttSet<T> out = identity_stt<T>(order, ab.t_start, n);
  out.t_end = bc.t_end;
  const auto& F = bc.phi1;
  const auto& G = ab.phi1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a) {
      T s(0);
      for (std::size_t k = 0; k < n; ++k) s += F(i, k) * G(k, a);
      out.phi1(i, a) = s;
    }
  if (order < 2) return out;

  // m[i][a][l] = bc.phi2[i][k][l] G[k][a]
  std::vector<T> m(n * n * n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t l = 0; l < n; ++l) {
        T s(0);
        for (std::size_t k = 0; k < n; ++k) s += bc.phi2(i, k, l) * G(k, a);
        m[(i * n + a) * n + l] = s;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b) {
        T s(0);
        for (std::size_t k = 0; k < n; ++k) s += F(i, k) * ab.phi2(k, a, b) + m[(i * n + a) * n + k] * G(k, b);
        out.phi2(i, a, b) = s;
        out.phi2(i, b, a) = s;
      }
  if (order < 3) return out;

  // w1[i][a][k][l] = bc.phi3[i][j][k][l] G[j][a]; w2[i][a][b][l] = w1[i][a][k][l] G[k][b]
  std::vector<T> w1(n * n * n * n, T(0)), w2(n * n * n * n, T(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          T s(0);
          for (std::size_t j = 0; j < n; ++j) s += bc.phi3(i, j, k, l) * G(j, a);
          w1[((i * n + a) * n + k) * n + l] = s;
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t l = 0; l < n; ++l) {
          T s(0);
          for (std::size_t k = 0; k < n; ++k) s += w1[((i * n + a) * n + k) * n + l] * G(k, b);
          w2[((i * n + a) * n + b) * n + l] = s;
        }
  auto X = [&](std::size_t i, std::size_t a, std::size_t b, std::size_t c) {
    T s(0);
    for (std::size_t k = 0; k < n; ++k) s += m[(i * n + a) * n + k] * ab.phi2(k, b, c);
    return s;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        for (std::size_t c = b; c < n; ++c) {
          T s = X(i, a, b, c) + X(i, b, a, c) + X(i, c, a, b);
          for (std::size_t k = 0; k < n; ++k) {
            s += F(i, k) * ab.phi3(k, a, b, c);
            s += w2[((i * n + a) * n + b) * n + k] * G(k, c);
          }
          const std::size_t perm[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
          for (const auto& q : perm) out.phi3(i, q[0], q[1], q[2]) = s;
        }
  return out;
}

/// Composes consecutive per-interval STTs sets[first..last) into one map.
template <class T>
BasicSttSet<T> compose_range(const std::vector<BasicSttSet<T>>& sets, std::size_t first, std::size_t last) {
  if (first >= last || last > sets.size()) throw std::invalid_argument("compose_range: empty range");
  BasicSttSet<T> acc = sets[first];
  for (std::size_t k = first + 1; k < last; ++k) acc = compose_stts(acc, sets[k]);
  return acc;
}

/// Taylor series through order m: sum_p (1/p!) phi_p dx^p.
template <class T, class V>
V propagate_perturbation_stt(const BasicSttSet<T>& stt, const V& dx, int m) {
  if (m < 1 || m > stt.order) throw std::invalid_argument("propagate_perturbation_stt: m exceeds STT order");
  const std::size_t n = stt.dim();
  V out = dx;
  for (std::size_t i = 0; i < n; ++i) {
    T s(0);
    for (std::size_t a = 0; a < n; ++a) s += stt.phi1(i, a) * dx[a];
    if (m >= 2) {
      T s2(0);
      for (std::size_t a = 0; a < n; ++a) {
        T sa(0);
        for (std::size_t b = 0; b < n; ++b) sa += stt.phi2(i, a, b) * dx[b];
        s2 += sa * dx[a];
      }
      s += s2 / T(2);
    }
    if (m >= 3) {
      T s3(0);
      for (std::size_t a = 0; a < n; ++a) {
        T sa(0);
        for (std::size_t b = 0; b < n; ++b) {
          T sb(0);
          for (std::size_t c = 0; c < n; ++c) sb += stt.phi3(i, a, b, c) * dx[c];
          sa += sb * dx[b];
        }
        s3 += sa * dx[a];
      }
      s += s3 / T(6);
    }
    out[i] = s;
  }
  return out;
}

/// Reference trajectory sampled at `times` (seconds) from a state given at times.front().
TrajectoryGrid integrate_trajectory(const StateVector& x0, std::span<const double> times, const ModelSet& models,
                                    const IntegratorConfig& cfg);
TrajectoryGrid integrate_trajectory(const StateVector& x0, double t0, double tf, double grid_step,
                                    const ModelSet& models, const IntegratorConfig& cfg);

/// Per-interval STTs over consecutive grid times; decomposed variants use the
/// selected component's partials along the full-dynamics reference.
std::vector<SttSet> integrate_stts(const StateVector& x0, std::span<const double> times, int order,
                                   const ModelSet& models, const IntegratorConfig& cfg,
                                   DynamicsComponent which = DynamicsComponent::Full,
                                   TrajectoryGrid* reference = nullptr);

StateArray propagate_perturbation_stt(const SttSet& stt, const StateArray& dx, int m);

}  // namespace aerostt
