#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "xychain/error.hpp"
#include "xychain/exact.hpp"
#include "xychain/model.hpp"
#include "xychain/numeric.hpp"
#include "xychain/trace.hpp"

namespace xychain {

struct RevivalPeak {
  int j;
  double t_peak;
  double height;
};

struct RevivalReport {
  double t_th = 0.0;
  int n_sites = 0;
  std::vector<RevivalPeak> peaks;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  double exponent_stderr = std::numeric_limits<double>::quiet_NaN();
  int fit_j_min = 1;
  int fit_j_max = 0;
};

struct DecayFit {
  double slope;
  double stderr_;
};

constexpr double revival_half_window = 0.25;

// Windows j t_th +- t_th/4 may be covered by a sparse trace, as long as each
// window itself is sampled with step <= t_th/200.
inline RevivalReport detect_revivals(const CorrelationTrace& tr, double t_th, int j_max) {
  if (!(t_th > 0.0) || !std::isfinite(t_th)) throw InvalidParameter("t_th must be positive and finite");
  if (j_max < 1) throw InvalidParameter("j_max must be >= 1");
  const auto& t = tr.times;
  const auto& g = tr.values;
  if (t.size() != g.size()) throw InvalidParameter("trace times and values differ in length");
  if (!std::is_sorted(t.begin(), t.end())) throw InvalidParameter("trace times must be ascending");
  const double max_step = t_th / 200.0 * (1.0 + 1e-9);
  RevivalReport rep;
  rep.t_th = t_th;
  rep.n_sites = tr.params.n_sites();
  rep.fit_j_max = j_max;
  for (int j = 1; j <= j_max; ++j) {
    const double lo = (j - revival_half_window) * t_th, hi = (j + revival_half_window) * t_th;
    const auto first = std::lower_bound(t.begin(), t.end(), lo) - t.begin();
    const auto last = std::upper_bound(t.begin(), t.end(), hi) - t.begin();  // one past
    if (last - first < 3) throw GridTooCoarse("revival window " + std::to_string(j) + " is not covered");
    if (t[first] - lo > max_step || hi - t[last - 1] > max_step)
      throw GridTooCoarse("revival window " + std::to_string(j) + " is not covered");
    auto best = first;
    for (auto i = first; i < last; ++i) {
      if (i > first && t[i] - t[i - 1] > max_step)
        throw GridTooCoarse("grid step exceeds t_th/200 in revival window " + std::to_string(j));
      if (g[i] > g[best]) best = i;
    }
    numeric::Peak pk{t[best], g[best]};
    if (best > first && best + 1 < last) {
      const double step = t[best + 1] - t[best];
      if (std::abs((t[best] - t[best - 1]) - step) <= 1e-9 * step)
        pk = numeric::quadratic_peak(t[best], step, g[best - 1], g[best], g[best + 1]);
    }
    rep.peaks.push_back({j, pk.x, pk.y});
  }
  return rep;
}

// Least-squares slope of log(height) against log(jN) over the report's fit range.
inline DecayFit fit_decay_exponent(const RevivalReport& rep) {
  std::vector<double> x, y;
  for (const auto& pk : rep.peaks) {
    if (pk.j < rep.fit_j_min || pk.j > rep.fit_j_max) continue;
    if (!(pk.height > 0.0)) throw InvalidParameter("revival heights must be positive");
    x.push_back(std::log(static_cast<double>(pk.j) * rep.n_sites));
    y.push_back(std::log(pk.height));
  }
  const std::size_t n = x.size();
  if (n < 4) throw InsufficientPeaks("decay fit needs at least 4 peaks in the fit range");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    ss += r * r;
  }
  return {slope, std::sqrt(ss / (n - 2) / sxx)};
}

inline RevivalReport with_fit(RevivalReport rep, int j_min, int j_max) {
  rep.fit_j_min = j_min;
  rep.fit_j_max = j_max;
  const auto f = fit_decay_exponent(rep);
  rep.fitted_exponent = f.slope;
  rep.exponent_stderr = f.stderr_;
  return rep;
}

// Time grid made only of the revival windows, step dt inside each.
inline std::vector<double> revival_window_grid(double t_th, int j_min, int j_max, double dt) {
  std::vector<double> out;
  for (int j = j_min; j <= j_max; ++j) {
    const auto w = uniform_grid((j - revival_half_window) * t_th, (j + revival_half_window) * t_th + dt, dt);
    out.insert(out.end(), w.begin(), w.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct SensitivityTrace {
  ModelParams params;
  ModelParams perturbed;
  std::vector<double> times;
  std::vector<double> abs_diff;
  double baseline;
  double sigma1;
  double sigma2;

  double mean_over(double t_lo, double t_hi) const {
    double acc = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= t_lo && times[i] <= t_hi) {
        acc += abs_diff[i];
        ++n;
      }
    if (n == 0) throw InvalidParameter("no samples in the averaging window");
    return acc / n;
  }
};

constexpr int sensitivity_baseline_samples = 4001;

namespace detail {

inline double late_sigma(const ModelParams& p, const std::vector<double>& late, int threads) {
  const double avg = long_time_average(p).value;
  const auto tr = exact_trace(p, 0, late, threads);
  numeric::CompensatedSum ss;
  for (double v : tr.values) ss += (v - avg) * (v - avg);
  return std::sqrt(ss.value() / static_cast<double>(late.size()));
}

}  // namespace detail

// |g(t; p) - g(t; p + delta)| against the level expected for two uncorrelated
// signals, sqrt(2/pi) * sqrt(s1^2 + s2^2), with s_i the spread about the
// long-time average over [10, 20] t_th.
inline SensitivityTrace sensitivity(const ModelParams& p, double delta_gamma, double delta_h,
                                    const std::vector<double>& times, int threads = 1) {
  const ModelParams q(p.n_sites(), p.signed_h() + delta_h, p.signed_gamma() + delta_gamma);
  const auto g1 = exact_trace(p, 0, times, threads);
  const auto g2 = exact_trace(q, 0, times, threads);
  std::vector<double> diff(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) diff[i] = std::abs(g1.values[i] - g2.values[i]);
  const double t_th = 0.5 * (threshold_time(p) + threshold_time(q));
  if (!std::isfinite(t_th)) throw DomainError("sensitivity baseline needs a finite threshold time");
  std::vector<double> late(sensitivity_baseline_samples);
  for (int k = 0; k < sensitivity_baseline_samples; ++k)
    late[k] = t_th * (10.0 + 10.0 * k / (sensitivity_baseline_samples - 1));
  const double s1 = detail::late_sigma(p, late, threads);
  const double s2 = detail::late_sigma(q, late, threads);
  const double base = std::sqrt(2.0 / std::numbers::pi) * std::hypot(s1, s2);
  return {p, q, times, diff, base, s1, s2};
}

}  // namespace xychain
