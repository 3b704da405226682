#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace aerostt::harness {

/// Box-plot summary: quartiles by linear interpolation between order statistics
/// (the "type 7" rule), whiskers at the most extreme samples within 1.5 IQR of
/// the box, and the largest samples beyond the upper/lower whiskers.
struct BoxStats {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Up to five samples outside the whiskers, largest distance from the median first.
  std::vector<double> top_outliers;
};

double quantile(std::vector<double> sorted_or_not, double p);
BoxStats box_stats(std::vector<double> values, std::size_t n_outliers = 5);
nlohmann::json to_json(const BoxStats& s);

}  // namespace aerostt::harness
