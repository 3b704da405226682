#include "aerostt/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace aerostt {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw std::invalid_argument("integrator tolerances must be positive");
  if (max_steps <= 0) throw std::invalid_argument("integrator max_steps must be positive");
}

std::vector<double> uniform_grid(double t0, double tf, double dt) {
  if (!(tf > t0)) throw std::invalid_argument("uniform_grid: tf must exceed t0");
  if (!(dt > 0)) throw std::invalid_argument("uniform_grid: step must be positive");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((tf - t0) / dt + 1e-9));
  for (long k = 0; k <= n; ++k) out.push_back(t0 + static_cast<double>(k) * dt);
  if (tf - out.back() > 1e-9 * dt) out.push_back(tf);
  else out.back() = tf;
  return out;
}

TrajectoryGrid integrate_trajectory(const StateVector& x0, std::span<const double> times, const ModelSet& models,
                                    const IntegratorConfig& cfg) {
  if (times.empty()) throw std::invalid_argument("integrate_trajectory: empty time grid");
  const Scales sc = models.scales();
  const auto p = make_parameters(models, Units::Nondimensional);
  const StateVector xn = sc.nondimensionalize(x0);
  TrajectoryGrid grid;
  grid.times.assign(times.begin(), times.end());
  grid.grid_step = times.size() > 1 ? times[1] - times[0] : 0.0;
  grid.states.push_back(xn);
  VariationalSystem<double> sys(p, 0, DynamicsComponent::Full);
  Dop853<double> stepper(kStateDim, cfg);
  std::vector<double> y(xn.x.begin(), xn.x.end());
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    if (!(times[k + 1] > times[k])) throw std::invalid_argument("integrate_trajectory: times must increase");
    stepper.integrate(sys, times[k] / sc.time_ref, times[k + 1] / sc.time_ref, y);
    StateVector s;
    for (std::size_t i = 0; i < kStateDim; ++i) s[i] = y[i];
    grid.states.push_back(s);
  }
  return grid;
}

TrajectoryGrid integrate_trajectory(const StateVector& x0, double t0, double tf, double grid_step,
                                    const ModelSet& models, const IntegratorConfig& cfg) {
  const auto times = uniform_grid(t0, tf, grid_step);
  auto grid = integrate_trajectory(x0, times, models, cfg);
  grid.grid_step = grid_step;
  return grid;
}

std::vector<SttSet> integrate_stts(const StateVector& x0, std::span<const double> times, int order,
                                   const ModelSet& models, const IntegratorConfig& cfg, DynamicsComponent which,
                                   TrajectoryGrid* reference) {
  const Scales sc = models.scales();
  const auto p = make_parameters(models, Units::Nondimensional);
  const StateVector xn = sc.nondimensionalize(x0);
  std::vector<StateArray> states;
  auto out = integrate_stts_nd<double>(xn.x, times, sc.time_ref, p, order, which, cfg, reference ? &states : nullptr);
  if (reference) {
    reference->times.assign(times.begin(), times.end());
    reference->grid_step = times[1] - times[0];
    reference->states.clear();
    for (const auto& s : states) reference->states.push_back(StateVector{s, Units::Nondimensional});
  }
  return out;
}

StateArray propagate_perturbation_stt(const SttSet& stt, const StateArray& dx, int m) {
  return propagate_perturbation_stt<double, StateArray>(stt, dx, m);
}

}  // namespace aerostt
