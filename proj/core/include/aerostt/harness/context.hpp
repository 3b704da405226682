#pragma once

// Shared, lazily computed analysis state for the experiments: the reference
// trajectory, per-interval STTs, composed maps from the initial time, Taylor
// models for each approximation method, and extended-precision truth flows.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aerostt/dstt.hpp"
#include "aerostt/harness/config.hpp"
#include "aerostt/propagation.hpp"
#include "aerostt/qoi.hpp"

namespace aerostt::harness {

enum class Method { Stm, Stt2, Stt3, Dstt1, Dstt3, Dstt6, Dstt7, HoDstt, SDstt, EpsQDstt, RaQDstt };

const char* to_string(Method m);
Method method_from_string(const std::string& s);
bool is_dstt(Method m);

/// A truncated Taylor map of the flow ready to push perturbations through.
struct TaylorModel {
  Method method = Method::Stm;
  /// Full STT; its order bounds the expansion of STT methods.
  const SttSet* stt = nullptr;
  std::optional<DsttSet> dstt;

  StateArray apply(const StateArray& dx) const;
};

using LdState = StateOf<long double>;

class AnalysisContext {
 public:
  explicit AnalysisContext(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const ModelSet& models() const { return cfg_.models; }
  const Scales& scales() const { return scales_; }
  const DynamicsParameters& params() const { return params_; }
  const QoiParameters& qoi_params() const { return qoi_; }
  const StateVector& x0() const { return x0_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t n_intervals() const { return times_.size() - 1; }
  std::string hash() const { return hash_; }

  /// Reference states at the grid times (nondimensional).
  const TrajectoryGrid& reference();
  /// Per-interval STTs: third order for the full dynamics, first order for the decomposed parts.
  const std::vector<SttSet>& interval_stts(DynamicsComponent c = DynamicsComponent::Full);
  /// Map over (t_0, t_k), k = 1..n_intervals().
  const SttSet& map_from_start(std::size_t k);
  const SttSet& full_map() { return map_from_start(n_intervals()); }

  /// Basis for a DSTT method over `map`, with quantity partials at the map's final state.
  RotationBasis basis_for(Method m, const SttSet& map, const StateArray& x_end);
  TaylorModel model_for(Method m, const SttSet& map, const StateArray& x_end);

  /// Extended-precision nominal trajectory with its accepted steps per grid segment.
  const std::vector<LdState>& oracle_nominal();
  /// Replays the nominal step sequence from x0 + dx0, returning the states at every grid time.
  std::vector<LdState> oracle_perturbed(const StateArray& dx0, std::size_t last_index = static_cast<std::size_t>(-1));

 private:
  ExperimentConfig cfg_;
  Scales scales_;
  DynamicsParameters params_;
  QoiParameters qoi_;
  StateVector x0_;
  std::vector<double> times_;
  std::string hash_;
  std::optional<TrajectoryGrid> reference_;
  std::map<DynamicsComponent, std::vector<SttSet>> stts_;
  std::vector<std::optional<SttSet>> from_start_;
  std::vector<LdState> oracle_states_;
  std::vector<std::vector<long double>> oracle_steps_;
};

}  // namespace aerostt::harness
