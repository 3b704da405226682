#include "aerostt/harness/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace aerostt::harness {

namespace {

double sorted_quantile(const std::vector<double>& s, double p) {
  const double h = (static_cast<double>(s.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile of empty sample");
  if (p < 0 || p > 1) throw std::invalid_argument("quantile level must be in [0, 1]");
  std::sort(v.begin(), v.end());
  return sorted_quantile(v, p);
}

BoxStats box_stats(std::vector<double> v, std::size_t n_outliers) {
  BoxStats s;
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }), v.end());
  s.count = v.size();
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = sorted_quantile(v, 0.5);
  s.q1 = sorted_quantile(v, 0.25);
  s.q3 = sorted_quantile(v, 0.75);
  s.iqr = s.q3 - s.q1;
  s.min = v.front();
  s.max = v.back();
  const double lo_fence = s.q1 - 1.5 * s.iqr, hi_fence = s.q3 + 1.5 * s.iqr;
  s.whisker_low = *std::lower_bound(v.begin(), v.end(), lo_fence);
  s.whisker_high = *(std::upper_bound(v.begin(), v.end(), hi_fence) - 1);
  std::vector<double> out;
  for (double x : v)
    if (x < s.whisker_low || x > s.whisker_high) out.push_back(x);
  std::stable_sort(out.begin(), out.end(),
                   [&](double a, double b) { return std::abs(a - s.median) > std::abs(b - s.median); });
  if (out.size() > n_outliers) out.resize(n_outliers);
  s.top_outliers = out;
  return s;
}

nlohmann::json to_json(const BoxStats& s) {
  return {{"count", s.count},   {"mean", s.mean},       {"median", s.median},
          {"q1", s.q1},         {"q3", s.q3},           {"iqr", s.iqr},
          {"whisker_low", s.whisker_low}, {"whisker_high", s.whisker_high},
          {"min", s.min},       {"max", s.max},         {"top_outliers", s.top_outliers}};
}

}  // namespace aerostt::harness
