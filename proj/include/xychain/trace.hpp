#pragma once

#include <string>
#include <vector>

#include "xychain/model.hpp"

namespace xychain {

enum class Route { exact_mode_sum, winding_series, closed_xx, closed_ising_critical, asymptotic_composite, brute_force };

inline std::string route_name(Route r) {
  switch (r) {
    case Route::exact_mode_sum: return "exact_mode_sum";
    case Route::winding_series: return "winding_series";
    case Route::closed_xx: return "closed_xx";
    case Route::closed_ising_critical: return "closed_ising_critical";
    case Route::asymptotic_composite: return "asymptotic_composite";
    case Route::brute_force: return "brute_force";
  }
  return "unknown";
}

struct CorrelationTrace {
  ModelParams params;
  int site_offset = 0;
  std::vector<double> times;
  std::vector<double> values;
  Route route = Route::exact_mode_sum;
  int order = 0;  // truncation s or jmax where the route has one
};

// t_min + k*dt for k = 0, 1, ... while <= t_max (with a relative slack of 1e-12).
inline std::vector<double> uniform_grid(double t_min, double t_max, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("dt must be positive");
  if (!(t_max >= t_min) || t_min < 0.0) throw InvalidParameter("need 0 <= t_min <= t_max");
  const double span = t_max - t_min;
  const auto count = static_cast<long long>(std::floor(span / dt * (1.0 + 1e-12) + 1e-9)) + 1;
  if (count > 100'000'000) throw InvalidParameter("time grid too large");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) t[k] = t_min + static_cast<double>(k) * dt;
  return t;
}

}  // namespace xychain
