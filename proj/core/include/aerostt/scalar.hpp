#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <type_traits>

#include <boost/multiprecision/float128.hpp>

namespace aerostt {

/// Quad precision, used only for reference-grade oracle integrations.
using Quad = boost::multiprecision::float128;

/// Converts a decimal literal to any supported scalar without a detour through double.
template <class T>
T parse_constant(const char* text) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(std::strtold(text, nullptr));
  } else {
    return T(text);
  }
}

inline double to_double(double x) { return x; }
inline double to_double(long double x) { return static_cast<double>(x); }
inline double to_double(const Quad& x) { return x.convert_to<double>(); }

inline long double to_long_double(double x) { return x; }
inline long double to_long_double(long double x) { return x; }
inline long double to_long_double(const Quad& x) { return x.convert_to<long double>(); }

/// Plain scalar value of a number; jets override this to strip derivative parts.
inline double value_of(double x) { return x; }
inline long double value_of(long double x) { return x; }
inline Quad value_of(const Quad& x) { return x; }

}  // namespace aerostt
