#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "xychain/error.hpp"
#include "xychain/exact.hpp"
#include "xychain/model.hpp"
#include "xychain/numeric.hpp"
#include "xychain/specfun.hpp"

namespace xychain {

enum class WindingMethod { quadrature, bessel_xx, bessel_ising_critical };

inline std::string method_name(WindingMethod m) {
  switch (m) {
    case WindingMethod::quadrature: return "quadrature";
    case WindingMethod::bessel_xx: return "bessel_xx";
    case WindingMethod::bessel_ising_critical: return "bessel_ising_critical";
  }
  return "unknown";
}

struct WindingTerm {
  int j = 0;
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  WindingMethod method = WindingMethod::quadrature;
  double error_estimate = 0.0;
};

struct QuadratureOptions {
  bool estimate_error = true;
  double oscillation_budget = 1e6;
};

inline bool is_xx(const ModelParams& p) { return p.gamma() == 0.0; }
inline bool is_critical_ising(const ModelParams& p) { return p.h() == 1.0 && p.gamma() == 1.0; }

namespace detail {

struct WindingSums {
  std::vector<double> a, b;
};

inline WindingSums winding_panels(int jmax, double t, const ModelParams& p, int scale) {
  const auto& gl = numeric::GL16::get();
  const double h = p.h(), g = p.gamma();
  const int nn = p.n_sites();
  const double v = max_group_velocity(p).v_max;
  const double pi = std::numbers::pi;

  std::vector<double> cuts{0.0};
  if (g == 0.0 && h < 1.0 && h > -1.0) cuts.push_back(std::acos(h));
  cuts.push_back(pi);

  const double rate = static_cast<double>(jmax) * nn + t * v;
  const int total = (2 * static_cast<int>(std::ceil(rate)) + 4) * scale;

  std::vector<numeric::CompensatedSum> sa(jmax + 1), sb(jmax + 1);
  std::vector<double> pa(jmax + 1), pb(jmax + 1);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(total * (hi - lo) / pi)));
    const double w = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
      const double mid = lo + (k + 0.5) * w;
      std::fill(pa.begin(), pa.end(), 0.0);
      std::fill(pb.begin(), pb.end(), 0.0);
      for (int i = 0; i < 16; ++i) {
        const double phi = mid + 0.5 * w * gl.x[i];
        const double eps = h - std::cos(phi);
        const double e = std::hypot(eps, g * std::sin(phi));
        const double ratio = e > 0.0 ? eps / e : 0.0;
        const auto cs = numeric::cos_sin_product(e, t);
        const double fa = gl.w[i] * cs.c;
        const double fb = gl.w[i] * ratio * cs.s;
        for (int j = 0; j <= jmax; ++j) {
          const double cj = j == 0 ? 1.0 : std::cos(numeric::reduced_phase(static_cast<double>(j) * nn, phi));
          pa[j] += fa * cj;
          pb[j] += fb * cj;
        }
      }
      for (int j = 0; j <= jmax; ++j) {
        sa[j] += 0.5 * w * pa[j];
        sb[j] += 0.5 * w * pb[j];
      }
    }
  }
  WindingSums out;
  out.a.resize(jmax + 1);
  out.b.resize(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    out.a[j] = sa[j].value() / pi;
    out.b[j] = sb[j].value() / pi;
  }
  return out;
}

}  // namespace detail

// A_j = (1/pi) int_0^pi cos(Et) cos(jN phi), B_j = (1/pi) int_0^pi (eps/E) sin(Et) cos(jN phi),
// for every j = 0..jmax in one pass over the nodes.
inline std::vector<WindingTerm> winding_terms_quad(int jmax, double t, const ModelParams& p,
                                                   const QuadratureOptions& opt = {}) {
  if (jmax < 0) throw InvalidParameter("winding number must be non-negative");
  if (t < 0.0) throw InvalidParameter("time must be non-negative");
  const double work = static_cast<double>(jmax) * p.n_sites() + t * (p.h() + 1.0);
  if (work > opt.oscillation_budget) throw BudgetExceeded("winding quadrature exceeds the oscillation budget");
  const auto fine = detail::winding_panels(jmax, t, p, opt.estimate_error ? 2 : 1);
  std::vector<WindingTerm> out(jmax + 1);
  if (opt.estimate_error) {
    const auto coarse = detail::winding_panels(jmax, t, p, 1);
    for (int j = 0; j <= jmax; ++j)
      out[j] = {j, t, fine.a[j], fine.b[j], WindingMethod::quadrature,
                std::max(std::abs(fine.a[j] - coarse.a[j]), std::abs(fine.b[j] - coarse.b[j]))};
  } else {
    for (int j = 0; j <= jmax; ++j) out[j] = {j, t, fine.a[j], fine.b[j], WindingMethod::quadrature, 0.0};
  }
  return out;
}

inline WindingTerm winding_term_quad(int j, double t, const ModelParams& p, const QuadratureOptions& opt = {}) {
  if (j < 0) throw InvalidParameter("winding number must be non-negative");
  const double work = static_cast<double>(j) * p.n_sites() + t * (p.h() + 1.0);
  if (work > opt.oscillation_budget) throw BudgetExceeded("winding quadrature exceeds the oscillation budget");
  return winding_terms_quad(j, t, p, opt)[j];
}

inline std::vector<WindingTerm> winding_terms_closed(int jmax, double t, const ModelParams& p) {
  const int nn = p.n_sites();
  std::vector<WindingTerm> out(jmax + 1);
  if (is_xx(p)) {
    std::vector<int> orders;
    for (int j = 0; j <= jmax; ++j) orders.push_back(j * nn);
    const auto jv = bessel_j_many(orders, t);
    const auto cs = numeric::cos_sin_product(p.h(), t);
    for (int j = 0; j <= jmax; ++j) {
      const double sign = ((static_cast<long long>(j) * nn / 2) % 2 == 0) ? 1.0 : -1.0;
      out[j] = {j, t, sign * cs.c * jv[j], sign * cs.s * jv[j], WindingMethod::bessel_xx, 0.0};
    }
    return out;
  }
  if (is_critical_ising(p)) {
    std::vector<int> orders;
    for (int j = 0; j <= jmax; ++j) {
      orders.push_back(2 * j * nn);
      orders.push_back(2 * j * nn + 1);
      orders.push_back(2 * j * nn - 1);
    }
    const auto jv = bessel_j_many(orders, 2.0 * t);
    for (int j = 0; j <= jmax; ++j)
      out[j] = {j, t, jv[3 * j], 0.5 * (jv[3 * j + 1] - jv[3 * j + 2]), WindingMethod::bessel_ising_critical, 0.0};
    return out;
  }
  throw InvalidParameter("closed winding forms need gamma = 0, or h = 1 with gamma = 1");
}

inline WindingTerm winding_term_closed(int j, double t, const ModelParams& p) {
  if (j < 0) throw InvalidParameter("winding number must be non-negative");
  return winding_terms_closed(j, t, p)[j];
}

enum class SeriesMethod { automatic, quadrature, closed };

inline std::vector<WindingTerm> winding_terms(int jmax, double t, const ModelParams& p, SeriesMethod m) {
  const bool special = is_xx(p) || is_critical_ising(p);
  if (m == SeriesMethod::closed || (m == SeriesMethod::automatic && special)) return winding_terms_closed(jmax, t, p);
  QuadratureOptions opt;
  opt.estimate_error = false;
  return winding_terms_quad(jmax, t, p, opt);
}

struct SeriesSums {
  double a_odd, a_ev, b_odd, b_ev;
  double g() const { return 0.5 * (a_odd * a_odd + a_ev * a_ev + b_odd * b_odd + b_ev * b_ev); }
};

// Odd momenta resum with all signs +, even (half-integer) momenta with (-1)^j.
inline SeriesSums series_sums(const std::vector<WindingTerm>& terms, int s) {
  SeriesSums r{0, 0, 0, 0};
  if (terms.empty()) return r;
  r.a_odd = r.a_ev = terms[0].a;
  r.b_odd = r.b_ev = terms[0].b;
  for (int j = 1; j <= s && j < static_cast<int>(terms.size()); ++j) {
    const double sg = (j % 2 == 0) ? 2.0 : -2.0;
    r.a_odd += 2.0 * terms[j].a;
    r.b_odd += 2.0 * terms[j].b;
    r.a_ev += sg * terms[j].a;
    r.b_ev += sg * terms[j].b;
  }
  return r;
}

inline double g_series(int s, double t, const ModelParams& p, SeriesMethod m = SeriesMethod::automatic) {
  if (s < 0) throw InvalidParameter("truncation order must be non-negative");
  return series_sums(winding_terms(s, t, p, m), s).g();
}

inline int default_truncation(double t, const ModelParams& p) {
  return static_cast<int>(std::floor(t / threshold_time(p))) + 1;
}

inline double g_xx_closed(double t, int jmax, const ModelParams& p) {
  if (!is_xx(p)) throw InvalidParameter("the XX closed form needs gamma = 0");
  if (jmax < 0) throw InvalidParameter("jmax must be non-negative");
  std::vector<int> orders;
  for (int j = 0; j <= jmax; ++j) orders.push_back(j * p.n_sites());
  const auto jv = bessel_j_many(orders, t);
  numeric::CompensatedSum acc;
  for (int j = -jmax; j <= jmax; ++j)
    for (int k = -jmax; k <= jmax; ++k)
      if ((j + k) % 2 == 0) acc += jv[std::abs(j)] * jv[std::abs(k)];
  return acc.value();
}

// Sum of |exact n = 0 sum - truncated winding series| over the four sums.
inline double resummation_check(double t, int jmax, const ModelParams& p) {
  const auto ex = mode_sums(0, t, ModelParams(p.n_sites(), p.h(), p.gamma()));
  QuadratureOptions opt;
  opt.estimate_error = false;
  const auto se = series_sums(winding_terms_quad(jmax, t, p, opt), jmax);
  return std::abs(ex.a_odd - se.a_odd) + std::abs(ex.a_ev - se.a_ev) + std::abs(ex.b_odd - se.b_odd) +
         std::abs(ex.b_ev - se.b_ev);
}

}  // namespace xychain
