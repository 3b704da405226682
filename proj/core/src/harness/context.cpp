#include "aerostt/harness/context.hpp"

#include <stdexcept>

namespace aerostt::harness {

const char* to_string(Method m) {
  switch (m) {
    case Method::Stm: return "STM";
    case Method::Stt2: return "STT2";
    case Method::Stt3: return "STT3";
    case Method::Dstt1: return "1-DSTT";
    case Method::Dstt3: return "3-DSTT";
    case Method::Dstt6: return "6-DSTT";
    case Method::Dstt7: return "7-DSTT";
    case Method::HoDstt: return "hoDSTT";
    case Method::SDstt: return "sDSTT";
    case Method::EpsQDstt: return "eps-qDSTT";
    case Method::RaQDstt: return "ra-qDSTT";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (auto m : {Method::Stm, Method::Stt2, Method::Stt3, Method::Dstt1, Method::Dstt3, Method::Dstt6, Method::Dstt7,
                 Method::HoDstt, Method::SDstt, Method::EpsQDstt, Method::RaQDstt})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown method '" + s + "'");
}

bool is_dstt(Method m) { return m != Method::Stm && m != Method::Stt2 && m != Method::Stt3; }

StateArray TaylorModel::apply(const StateArray& dx) const {
  switch (method) {
    case Method::Stm: return propagate_perturbation_stt(*stt, dx, 1);
    case Method::Stt2: return propagate_perturbation_stt(*stt, dx, 2);
    case Method::Stt3: return propagate_perturbation_stt(*stt, dx, 3);
    default: return propagate_perturbation_dstt(*dstt, dx, 3);
  }
}

AnalysisContext::AnalysisContext(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  scales_ = cfg_.models.scales();
  params_ = make_parameters(cfg_.models, Units::Nondimensional);
  qoi_ = make_qoi_parameters(cfg_.models, Units::Nondimensional, cfg_.capture_margin);
  x0_ = initial_state(cfg_);
  times_ = uniform_grid(cfg_.t0, cfg_.tf, cfg_.grid_step);
  hash_ = config_hash(cfg_);
  from_start_.resize(times_.size());
}

const TrajectoryGrid& AnalysisContext::reference() {
  if (!reference_) {
    TrajectoryGrid grid;
    stts_[DynamicsComponent::Full] =
        integrate_stts(x0_, times_, 3, cfg_.models, cfg_.integrator, DynamicsComponent::Full, &grid);
    grid.grid_step = cfg_.grid_step;
    reference_ = std::move(grid);
  }
  return *reference_;
}

const std::vector<SttSet>& AnalysisContext::interval_stts(DynamicsComponent c) {
  if (c == DynamicsComponent::Full) {
    reference();
    return stts_.at(c);
  }
  auto it = stts_.find(c);
  if (it == stts_.end()) it = stts_.emplace(c, integrate_stts(x0_, times_, 1, cfg_.models, cfg_.integrator, c)).first;
  return it->second;
}

const SttSet& AnalysisContext::map_from_start(std::size_t k) {
  if (k < 1 || k > n_intervals()) throw std::out_of_range("map_from_start: grid index out of range");
  if (!from_start_[k]) {
    const auto& stts = interval_stts();
    if (!from_start_[1]) from_start_[1] = stts[0];
    for (std::size_t i = 2; i <= k; ++i)
      if (!from_start_[i]) from_start_[i] = compose_stts(*from_start_[i - 1], stts[i - 1]);
  }
  return *from_start_[k];
}

RotationBasis AnalysisContext::basis_for(Method m, const SttSet& map, const StateArray& x_end) {
  BasisAux aux;
  aux.eigen = cfg_.eigen;
  switch (m) {
    case Method::Dstt1: return build_basis(BasisMethod::Cgt2TopL, 1, map, aux);
    case Method::Dstt3: return build_basis(BasisMethod::Cgt2TopL, 3, map, aux);
    case Method::Dstt6: return build_basis(BasisMethod::Cgt2TopL, 6, map, aux);
    case Method::Dstt7: return build_basis(BasisMethod::Cgt2TopL, 7, map, aux);
    case Method::HoDstt: return build_basis(BasisMethod::Hocgt, 1, map, aux);
    case Method::SDstt:
      aux.selection = position_speed_fpa_selection();
      return build_basis(BasisMethod::Scgt, 1, map, aux);
    case Method::EpsQDstt:
      aux.qoi = qoi_partials(x_end, QoiKind::Energy, 3, qoi_);
      return build_basis(BasisMethod::QcgtEnergy, 1, map, aux);
    case Method::RaQDstt:
      aux.qoi = qoi_partials(x_end, QoiKind::Apoapsis, 3, qoi_);
      return build_basis(BasisMethod::QcgtApoapsis, 1, map, aux);
    default: throw std::invalid_argument(std::string("basis_for: ") + to_string(m) + " is not a DSTT method");
  }
}

TaylorModel AnalysisContext::model_for(Method m, const SttSet& map, const StateArray& x_end) {
  TaylorModel model;
  model.method = m;
  model.stt = &map;
  if (is_dstt(m)) model.dstt = construct_dstt(map, basis_for(m, map, x_end));
  return model;
}

const std::vector<LdState>& AnalysisContext::oracle_nominal() {
  if (oracle_states_.empty()) {
    IntegratorConfig c = cfg_.integrator;
    c.rel_tol = c.abs_tol = cfg_.oracle_tol;
    VariationalSystem<long double> sys(params_, 0, DynamicsComponent::Full);
    Dop853<long double> stepper(kStateDim, c);
    std::vector<long double> y(x0_.x.begin(), x0_.x.end());
    LdState x;
    for (std::size_t i = 0; i < kStateDim; ++i) x[i] = y[i];
    oracle_states_.push_back(x);
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
      stepper.record_steps(true);
      stepper.integrate(sys, static_cast<long double>(times_[k]) / scales_.time_ref,
                        static_cast<long double>(times_[k + 1]) / scales_.time_ref, y);
      oracle_steps_.push_back(stepper.recorded_steps());
      for (std::size_t i = 0; i < kStateDim; ++i) x[i] = y[i];
      oracle_states_.push_back(x);
    }
  }
  return oracle_states_;
}

std::vector<LdState> AnalysisContext::oracle_perturbed(const StateArray& dx0, std::size_t last_index) {
  oracle_nominal();
  last_index = std::min(last_index, times_.size() - 1);
  LdState x = oracle_states_[0];
  for (std::size_t i = 0; i < kStateDim; ++i) x[i] += dx0[i];
  std::vector<LdState> out{x};
  for (std::size_t k = 0; k < last_index; ++k) {
    x = replay_state_nd<long double>(x, static_cast<long double>(times_[k]) / scales_.time_ref, oracle_steps_[k],
                                     params_);
    out.push_back(x);
  }
  return out;
}

}  // namespace aerostt::harness
