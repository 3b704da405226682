#pragma once

// The analyses behind each CLI subcommand. run_* functions compute and return
// results; cmd_* functions additionally write CSV files and a JSON summary into
// an output directory and return the summary.

#include <array>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aerostt/harness/context.hpp"
#include "aerostt/harness/statistics.hpp"

namespace aerostt::harness {

// ---- reference ------------------------------------------------------------

struct ReferenceResult {
  std::vector<double> times;
  std::vector<StateVector> states;      // nondimensional
  std::vector<double> energy;           // nondimensional
  std::vector<double> apoapsis;         // nondimensional, NaN while not captured
  std::vector<double> dynamic_pressure; // Pa
  std::vector<double> accel_ratio;
};

ReferenceResult run_reference(AnalysisContext& ctx);

/// First and last grid times with accel_ratio > 1; NaNs if the ratio never exceeds 1.
std::pair<double, double> accel_ratio_window(const ReferenceResult& ref);

// ---- STT validation -------------------------------------------------------

struct SttValidationResult {
  double segment_start = 0.0;
  double segment_end = 0.0;
  /// |finite difference - STT|_F / |STT|_F for orders 1..3 over the segment.
  std::array<double, 3> fd_rel_error{};
  std::vector<double> magnitudes;
  /// |Taylor_m(dx) - true dx_f| for m = 1..3 at each magnitude, over (t0, tf), with
  /// STTs and truth both taken from one quad-precision step sequence.
  std::array<std::vector<double>, 3> taylor_errors;
  std::array<double, 3> slopes{};
  /// Same with the composed double-precision map against the extended-precision
  /// oracle; flattens at small magnitudes where double rounding dominates.
  std::array<std::vector<double>, 3> taylor_errors_double;
  std::array<double, 3> slopes_double{};
  /// Composed per-interval STTs against one direct integration over (t0, tf).
  std::array<double, 3> composition_rel_error{};
  double runtime_fd_s = 0.0;
  double runtime_scaling_s = 0.0;
};

SttValidationResult run_stt_validation(AnalysisContext& ctx);

/// Least-squares slope of log10(y) against log10(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- eigen studies --------------------------------------------------------

struct DecomposedEigenRow {
  double t_start = 0.0;
  double t_end = 0.0;
  /// Dominant C2 eigenvector and eigenvalue of the full, conservative and dissipative maps.
  std::array<std::vector<double>, 3> v;
  std::array<double, 3> lambda{};
  double angle_dissipative_full = 0.0;
  double angle_conservative_full = 0.0;
  /// Change of each dominant direction from the previous interval (NaN on the first).
  std::array<double, 3> step_angle{};
  double max_accel_ratio = 0.0;
};

struct FamilyEigenRow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::string family;  // hocgt | scgt | qcgt-energy
  int order = 0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;  // NaN when only one distinct pair was found
  std::vector<double> v;
  double residual = 0.0;
  bool converged = false;
  std::string error;
};

struct MaximalityRow {
  std::string family;  // hocgt | scgt | qcgt-apoapsis
  int direction = 0;   // 0 = maximal eigenvector, 1..6 = completion vectors
  double angle_deg = 0.0;
  double objective = 0.0;
  double relative = 0.0;
  std::vector<double> d;
};

struct EigStudyResult {
  std::vector<DecomposedEigenRow> decomposed;
  std::vector<FamilyEigenRow> families;
  std::vector<MaximalityRow> maximality;
  /// Interval start times where the dominant order-3 HOCGT direction switches mode.
  std::vector<double> mode_switch_times;
  std::pair<double, double> accel_window{0.0, 0.0};
};

EigStudyResult run_eig_studies(AnalysisContext& ctx, bool families = true, bool maximality = true);

/// Maximality study over (t0, tf) for one family.
std::vector<MaximalityRow> run_maximality(AnalysisContext& ctx, const std::string& family);

// ---- direction study ------------------------------------------------------

struct DirectionStudyResult {
  std::vector<double> kappa_deg;
  std::vector<double> times;  // grid times t_1..t_N
  std::vector<std::string> methods{"STM", "STT2", "hoDSTT"};
  /// errors[method][kappa][k], nondimensional state-error norm at times[k].
  std::vector<std::vector<std::vector<double>>> errors;
  std::vector<double> r2;
  std::vector<double> u;
};

DirectionStudyResult run_direction_study(AnalysisContext& ctx);

// ---- Frobenius sweep ------------------------------------------------------

struct FrobeniusRow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::string method;
  double eps2 = 0.0;
  double eps3 = 0.0;
  double norm2 = 0.0;
  double norm3 = 0.0;
  bool low_nonlinearity = false;
};

/// Methods without a per-interval meaning (STM, STT2, STT3, ra-qDSTT) are skipped.
std::vector<FrobeniusRow> run_frobenius(AnalysisContext& ctx, const std::vector<std::string>& methods);

// ---- Monte Carlo ----------------------------------------------------------

struct MonteCarloMethodResult {
  std::string method;
  std::vector<double> energy_error;    // J/kg, one per sample
  std::vector<double> apoapsis_error;  // km, NaN where undefined
  BoxStats energy_stats;
  BoxStats apoapsis_stats;
  /// Samples whose predicted final state is not captured while the true one is.
  int prediction_not_captured = 0;
  /// Mean |energy error| (J/kg) at each grid time t_1..t_N; empty if not computed.
  std::vector<double> energy_history;
};

struct MonteCarloResult {
  int samples = 0;
  std::uint64_t seed = 0;
  /// Samples whose integrated final state is not captured (excluded from apoapsis statistics).
  int truth_not_captured = 0;
  std::vector<MonteCarloMethodResult> methods;
  std::vector<double> history_times;
  std::vector<StateArray> perturbations;  // nondimensional initial perturbations
  double runtime_s = 0.0;

  const MonteCarloMethodResult& at(const std::string& method) const;
};

MonteCarloResult run_monte_carlo(AnalysisContext& ctx, int samples, std::uint64_t seed,
                                 const std::vector<std::string>& methods, bool energy_history);

// ---- file-writing commands -------------------------------------------------

nlohmann::json cmd_reference(AnalysisContext& ctx, const std::filesystem::path& out);
nlohmann::json cmd_stt_validate(AnalysisContext& ctx, const std::filesystem::path& out);
nlohmann::json cmd_eig_studies(AnalysisContext& ctx, const std::filesystem::path& out);
nlohmann::json cmd_direction_study(AnalysisContext& ctx, const std::filesystem::path& out);
nlohmann::json cmd_frobenius(AnalysisContext& ctx, const std::filesystem::path& out);
nlohmann::json cmd_monte_carlo(AnalysisContext& ctx, const std::filesystem::path& out);

}  // namespace aerostt::harness
