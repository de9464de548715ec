#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "xychain/error.hpp"
#include "xychain/model.hpp"
#include "xychain/numeric.hpp"
#include "xychain/specfun.hpp"
#include "xychain/winding.hpp"

namespace xychain {

struct AsymptoticOptions {
  double airy_widths = 3.0;         // half-width of the Airy window, in Airy units
  double eps_margin = 10.0;         // generic Airy form needs h - 1 > eps_margin * gamma / N
  double far_margin = 10.0;         // zero-order form needs t > far_margin * max(1, 1/(h - 1))
  double large_gamma_margin = 10.0; // t (gamma^2 - 3/4) / (2 gamma) >= this
  double boundary_margin = 10.0;    // t >= boundary_margin * 24 sqrt(3)
  double critical_eps = 1e-9;       // |h - 1| below this counts as h = 1
};

enum class Regime {
  zero_far,
  zero_critical,
  saddle,
  airy_generic,
  airy_critical_gamma_large,
  airy_critical_boundary,
  suppressed,
  critical_tail
};

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::zero_far: return "zero_far";
    case Regime::zero_critical: return "zero_critical";
    case Regime::saddle: return "saddle";
    case Regime::airy_generic: return "airy_generic";
    case Regime::airy_critical_gamma_large: return "airy_critical_gamma_large";
    case Regime::airy_critical_boundary: return "airy_critical_boundary";
    case Regime::suppressed: return "suppressed";
    case Regime::critical_tail: return "critical_tail";
  }
  return "unknown";
}

struct RegimeSelector {
  Regime regime;
  int j;
  double t;
  double window_center;
  double window_half_width;
};

struct ZeroOrder {
  double a0;
  double b0;
  double g;
};

struct SaddleSolution {
  int j = 0;
  double t = 0.0;
  std::complex<double> phi1;
  std::complex<double> phi2;
  bool has_phi1 = true;  // false at h = 1 once phi1 has run into the branch point at 0
  bool degenerate = false;
  double residual = 0.0;
};

struct SuppressionEstimate {
  double log_magnitude;
  double a_approx;
  bool near_transition;
};

// Quantities at the velocity maximum, shared by the Airy and suppression forms.
struct ThresholdData {
  VelocityExtremum vel;
  double t_th;
  std::array<double, 6> jet;  // E, E', ..., E^(5) at phi0
  double eps0;
};

inline ThresholdData threshold_data(const ModelParams& p) {
  ThresholdData d{};
  d.vel = max_group_velocity(p);
  d.t_th = p.n_sites() / d.vel.v_max;
  d.jet = energy_jet(d.vel.phi0, p);
  d.eps0 = p.h() - std::cos(d.vel.phi0);
  return d;
}

namespace detail {

inline void require_domain(const ModelParams& p) {
  if (!p.asymptotic_domain()) throw RegimeError("asymptotic forms need h >= 1 and gamma in [0, 1]");
}

inline bool is_h_one(const ModelParams& p, const AsymptoticOptions& o) { return std::abs(p.h() - 1.0) <= o.critical_eps; }

inline double airy_half_width(const ThresholdData& d, int n_sites, double t, const AsymptoticOptions& o) {
  return o.airy_widths * (d.t_th / n_sites) * std::cbrt(std::abs(d.jet[3]) * t / 2.0);
}

// E t - m phi for a real momentum, reduced mod 2 pi.
inline double phase(double e, double t, double m, double phi) {
  return numeric::reduced_phase(e, t) - numeric::reduced_phase(m, phi);
}

inline std::string window_tag(int j, double t) {
  return "winding j=" + std::to_string(j) + ", t=" + std::to_string(t);
}

}  // namespace detail

// A0, B0 from the saddles at 0 and pi; g from them with no winding terms.
inline ZeroOrder zero_order_terms(double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  const double h = p.h(), b = p.gamma() * p.gamma();
  const double eps = h - 1.0;
  if (!(eps > 0.0)) throw RegimeError("zero-order far form needs h > 1");
  if (!(t > o.far_margin * std::max(1.0, 1.0 / eps)))
    throw RegimeError("zero-order far form needs t >> max(1, 1/(h-1))");
  const double am = std::sqrt((h - 1.0) / (h - (1.0 - b)));
  const double ap = std::sqrt((h + 1.0) / (h + (1.0 - b)));
  const double pre = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
  const double pm = numeric::reduced_phase(h - 1.0, t) + std::numbers::pi / 4;
  const double pp = numeric::reduced_phase(h + 1.0, t) - std::numbers::pi / 4;
  const double a0 = pre * (am * std::cos(pm) + ap * std::cos(pp));
  const double b0 = pre * (am * std::sin(pm) + ap * std::sin(pp));
  const double c = std::cos(t - std::numbers::pi / 4);
  const double g = ((ap - am) * (ap - am) + 4.0 * ap * am * c * c) / (2.0 * std::numbers::pi * t);
  return {a0, b0, g};
}

inline ZeroOrder zero_order_far(double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  const auto z = zero_order_terms(t, p, o);
  if (!(t < threshold_time(p))) throw RegimeError("zero-order far form for g needs t < t_th");
  return z;
}

// A0, B0 at h = 1 (branch points pinched at phi = 0).
inline ZeroOrder zero_order_critical_terms(double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  const double g = p.gamma(), b = g * g;
  const double eps = p.h() - 1.0;
  if (eps > o.critical_eps && !(eps * o.eps_margin <= std::min(g, 1.0 / p.n_sites())))
    throw RegimeError("critical zero-order form needs h - 1 << gamma and h - 1 << 1/N");
  if (b > 0.5) throw RegimeError("critical zero-order form needs gamma^2 <= 0.5");
  if (!(t > 1.0)) throw RegimeError("critical zero-order form needs t > 1");
  const double pre = 1.0 / std::sqrt(2.0 * std::numbers::pi * (2.0 - b) * t);
  const double kappa = b / std::sqrt(1.0 - b);
  const double damp = std::exp(-kappa * t);
  const double q = std::pow(1.0 - b, 0.25);
  const double ph = numeric::reduced_phase(2.0, t) - std::numbers::pi / 4;
  const double a0 = pre * (std::sqrt(2.0) * std::cos(ph) + q * damp);
  const double b0 = pre * (std::sqrt(2.0) * std::sin(ph) + damp / q);
  return {a0, b0, a0 * a0 + b0 * b0};
}

inline double zero_order_critical(double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  zero_order_critical_terms(t, p, o);
  const double b = p.gamma() * p.gamma();
  const double s = std::sqrt(1.0 - b);
  const double kappa = b / s;
  const double c = (2.0 - b) / (2.0 * s);
  const double ph = numeric::reduced_phase(2.0, t) - std::numbers::pi / 4 - std::atan(1.0 / s);
  return (1.0 + c * std::exp(-2.0 * kappa * t) + 2.0 * std::sqrt(c) * std::exp(-kappa * t) * std::cos(ph)) /
         (std::numbers::pi * (2.0 - b) * t);
}

// Coefficients (ascending) of the saddle quartic in z = cos(phi) for E'(phi) t = jN.
inline std::vector<double> saddle_quartic(double h, double gamma, double zeta) {
  const double b = gamma * gamma, a = 1.0 - b;
  return {-h * h + zeta * (h * h + b), 2.0 * a * h - 2.0 * zeta * h, h * h - a * a + zeta * a, -2.0 * a * h, a * a};
}

inline SaddleSolution saddle_solve(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("saddle_solve needs j >= 1");
  if (!(t > 0.0)) throw InvalidParameter("saddle_solve needs t > 0");
  const auto d = threshold_data(p);
  const double jn = static_cast<double>(j) * p.n_sites();
  const double target = jn / t;
  const auto coeffs = saddle_quartic(p.h(), p.gamma(), target * target);

  using C = std::complex<double>;
  auto residual = [&](C phi) { return energy_jet(phi, p)[1] * t - jn; };
  auto polish = [&](C phi) {
    for (int it = 0; it < 30; ++it) {
      const auto jet = energy_jet(phi, p);
      const C f = jet[1] * t - jn;
      const C fp = jet[2] * t;
      if (std::abs(fp) < 1e-300) break;
      const C next = phi - f / fp;
      if (!(std::abs(residual(next)) < std::abs(f))) break;
      phi = next;
    }
    return phi;
  };

  std::vector<C> cands;
  for (auto z : numeric::polynomial_roots(coeffs)) {
    z = numeric::newton_polish(coeffs, z, 10);
    if (std::abs(z.imag()) < 1e-7 * (1.0 + std::abs(z)) && std::abs(z.real()) <= 1.0) z = z.real();
    C phi = std::acos(z);
    if (phi.imag() == 0.0 && (phi.real() <= 0.0 || phi.real() >= std::numbers::pi)) continue;
    phi = polish(phi);
    if (phi.real() < -1e-12 || phi.real() > std::numbers::pi + 1e-12) continue;
    if (std::abs(residual(phi)) > 1e-6 * jn) continue;
    bool dup = false;
    for (const auto& c : cands)
      if (std::abs(c - phi) < 1e-9) dup = true;
    if (!dup) cands.push_back(phi);
  }

  SaddleSolution s;
  s.j = j;
  s.t = t;
  const double tj = j * d.t_th;
  s.degenerate = std::abs(t - tj) < detail::airy_half_width(d, p.n_sites(), t, o);
  const double phi0 = d.vel.phi0;

  if (t >= tj) {
    std::vector<double> real_roots;
    for (const auto& c : cands)
      if (std::abs(c.imag()) <= 1e-6) real_roots.push_back(c.real());
    if (real_roots.empty()) {
      // at the merge the pair may come out as a tiny complex pair
      for (const auto& c : cands)
        if (c.real() > 1e-9) real_roots.push_back(c.real());
    }
    std::sort(real_roots.begin(), real_roots.end());
    if (real_roots.empty()) {
      s.phi1 = s.phi2 = phi0;
    } else {
      double lo = std::numeric_limits<double>::quiet_NaN(), hi = lo;
      for (double r : real_roots) {
        if (r <= phi0 + 1e-9 && (std::isnan(lo) || std::abs(r - phi0) < std::abs(lo - phi0))) lo = r;
        if (r >= phi0 - 1e-9 && (std::isnan(hi) || std::abs(r - phi0) < std::abs(hi - phi0))) hi = r;
      }
      if (std::isnan(hi)) hi = lo;
      if (std::isnan(lo)) {
        lo = 0.0;
        s.has_phi1 = false;
      }
      if (d.vel.boundary_flag) {
        // phi0 = 0: the only real saddle sits on the far side
        s.has_phi1 = false;
        lo = 0.0;
        hi = real_roots.back();
      }
      s.phi1 = lo;
      s.phi2 = hi;
    }
  } else {
    C best = phi0;
    double dist = std::numeric_limits<double>::infinity();
    const bool off_axis = std::any_of(cands.begin(), cands.end(),
                                      [](const C& c) { return c.imag() < 0.0 && c.real() > 1e-9; });
    for (const auto& c : cands) {
      if (c.imag() >= 0.0) continue;
      if (off_axis && c.real() <= 1e-9) continue;  // on the imaginary axis
      const double dd = std::abs(c - phi0);
      if (dd < dist) {
        dist = dd;
        best = c;
      }
    }
    // saddle on the cut: approached from Re phi > 0
    if (best.real() <= 1e-9 && best.imag() != 0.0) best = C(1e-12, best.imag());
    s.phi1 = best;
    s.phi2 = std::conj(best);
  }
  double res = 0.0;
  if (s.has_phi1) res = std::max(res, std::abs(residual(s.phi1)));
  res = std::max(res, std::abs(residual(s.phi2)));
  s.residual = res;
  return s;
}

// Series for the complex saddle just before j t_th (cross-check of the direct roots).
inline std::complex<double> suppression_saddle_series(int j, double t, const ModelParams& p) {
  const auto d = threshold_data(p);
  const double e3 = d.jet[3], e4 = d.jet[4], e5 = d.jet[5];
  const double dt = t - j * d.t_th;
  const double eta = std::sqrt(-2.0 * p.n_sites() * dt / (std::abs(e3) * t * d.t_th));
  const double q = e4 / e3;
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  return d.vel.phi0 - i * eta + (q / 6.0) * eta * eta + i * (5.0 / 72.0 * q * q - e5 / (24.0 * e3)) * eta * eta * eta;
}

inline WindingTerm stationary_phase_term(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("stationary phase needs j >= 1");
  const auto d = threshold_data(p);
  const int nn = p.n_sites();
  const double w = detail::airy_half_width(d, nn, t, o);
  if (!(t >= j * d.t_th + w))
    throw RegimeError("stationary phase needs t beyond the Airy window of j t_th (" + detail::window_tag(j, t) + ")");
  const double eps = p.h() - 1.0;
  if (detail::is_h_one(p, o)) {
    if (p.gamma() * p.gamma() >= 0.75) throw RegimeError("stationary phase at h = 1 needs gamma^2 < 3/4");
    if (!(t < j * nn / p.gamma())) throw RegimeError("stationary phase at h = 1 ends at t = jN/gamma; use the tail form");
  } else if (!(eps * j * d.t_th > o.far_margin)) {
    throw RegimeError("stationary phase needs 1/(h-1) << j t_th");
  }
  const auto s = saddle_solve(j, t, p, o);
  if (!s.has_phi1) throw RegimeError("stationary phase lost the phi1 saddle (" + detail::window_tag(j, t) + ")");
  const double m = static_cast<double>(j) * nn;
  double a = 0.0, b = 0.0;
  const double shift[2] = {std::numbers::pi / 4, -std::numbers::pi / 4};
  const double phis[2] = {s.phi1.real(), s.phi2.real()};
  for (int k = 0; k < 2; ++k) {
    const auto jet = energy_jet(phis[k], p);
    const double amp = 1.0 / std::sqrt(std::abs(jet[2]));
    const double ratio = (p.h() - std::cos(phis[k])) / jet[0];
    const double ph = detail::phase(jet[0], t, m, phis[k]) + shift[k];
    a += amp * std::cos(ph);
    b += amp * ratio * std::sin(ph);
  }
  const double pre = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
  return {j, t, pre * a, pre * b, WindingMethod::quadrature, 0.0};
}

// Airy profile around j t_th for h not too close to 1.
inline WindingTerm airy_term(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("Airy form needs j >= 1");
  if (!(t > 0.0)) throw InvalidParameter("Airy form needs t > 0");
  const int nn = p.n_sites();
  if (!(p.h() - 1.0 > p.gamma() / nn * o.eps_margin))
    throw RegimeError("generic Airy form needs h - 1 >> gamma/N (" + detail::window_tag(j, t) + ")");
  const auto d = threshold_data(p);
  const double e3 = std::abs(d.jet[3]);
  if (e3 < 1e-10) throw RegimeError("generic Airy form needs E'''(phi0) != 0");
  const double s = std::cbrt(2.0 / (e3 * t));
  const double x = -nn * (t - j * d.t_th) / d.t_th * s;
  const double ai = airy_ai(x);
  const double m = static_cast<double>(j) * nn;
  const double ph = detail::phase(d.jet[0], t, m, d.vel.phi0);
  return {j, t, s * ai * std::cos(ph), d.eps0 / d.jet[0] * s * ai * std::sin(ph), WindingMethod::quadrature, 0.0};
}

inline WindingTerm airy_critical_large_gamma(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("Airy form needs j >= 1");
  const double g = p.gamma(), b = g * g;
  if (!detail::is_h_one(p, o) || !(b > 0.75 + o.critical_eps))
    throw RegimeError("large-gamma critical Airy form needs h = 1 and gamma^2 > 3/4");
  if (!(t * (b - 0.75) / (2.0 * g) >= o.large_gamma_margin))
    throw RegimeError("large-gamma critical Airy form needs t >> 2 gamma / (gamma^2 - 3/4)");
  const double s = std::cbrt(2.0 * g / ((b - 0.75) * t));
  const double x = -(g * t - static_cast<double>(j) * p.n_sites()) * s;
  return {j, t, 0.5 * s * airy_ai(x), s * s / (4.0 * g) * airy_ai_prime(x), WindingMethod::quadrature, 0.0};
}

inline WindingTerm airy_critical_boundary(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("boundary Airy form needs j >= 1");
  const double g = p.gamma();
  if (!detail::is_h_one(p, o) || std::abs(g * g - 0.75) > o.critical_eps)
    throw RegimeError("boundary Airy form needs h = 1 and gamma^2 = 3/4");
  const double c = 24.0 * std::sqrt(3.0);
  if (!(t >= o.boundary_margin * c)) throw RegimeError("boundary Airy form needs t >> 24 sqrt(3)");
  const double s = std::pow(c / t, 0.2);
  const double x = -(std::sqrt(3.0) * t / 2.0 - static_cast<double>(j) * p.n_sites()) * s;
  const auto v = detail::gai_eval(5, x);
  return {j, t, 0.5 * s * v.value, s * s / (4.0 * g) * v.derivative, WindingMethod::quadrature, 0.0};
}

namespace detail {

// On the cut phi = iy at h = 1: E = i w(y), w = sqrt(g^2 sinh^2 y - (cosh y - 1)^2).
struct CutPoint {
  double w, w1, w2;
};

inline CutPoint cut_eval(double y, double g) {
  const double sh = std::sinh(y), ch = std::cosh(y);
  const double gsum = g * g * sh * sh - (ch - 1.0) * (ch - 1.0);
  const double g1 = 2.0 * g * g * sh * ch - 2.0 * (ch - 1.0) * sh;
  const double g2 = 2.0 * g * g * std::cosh(2.0 * y) - 2.0 * (ch - 1.0) * ch - 2.0 * sh * sh;
  const double w = std::sqrt(std::max(gsum, 0.0));
  const double w1 = g1 / (2.0 * w);
  const double w2 = (g2 - 2.0 * w1 * w1) / (2.0 * w);
  return {w, w1, w2};
}

}  // namespace detail

// h = 1, gamma^2 < 3/4, t > jN/gamma: phi2 oscillation plus half of the decaying cut saddle.
inline WindingTerm critical_tail_term(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("tail form needs j >= 1");
  const double g = p.gamma();
  if (!detail::is_h_one(p, o)) throw RegimeError("tail form needs h = 1");
  if (!(g * g < 0.75 - o.critical_eps)) throw RegimeError("tail form needs gamma^2 < 3/4");
  const double m = static_cast<double>(j) * p.n_sites();
  if (!(g > 0.0) || !(t > m / g)) throw RegimeError("tail form needs t > jN/gamma (" + detail::window_tag(j, t) + ")");
  const double target = m / t;
  // w' falls from gamma at y = 0 to -inf at the branch point
  const double ybr = std::acosh((1.0 + g * g) / (1.0 - g * g));
  double lo = 1e-12 * ybr, hi = ybr * (1.0 - 1e-15);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::cut_eval(mid, g).w1 > target)
      lo = mid;
    else
      hi = mid;
  }
  const double y = 0.5 * (lo + hi);
  const auto cp = detail::cut_eval(y, g);
  const double decay = 0.5 / std::sqrt(std::abs(cp.w2)) * std::exp(-cp.w * t + m * y);

  const auto s = saddle_solve(j, t, p, o);
  const double phi2 = s.phi2.real();
  const auto jet = energy_jet(phi2, p);
  const double amp = 1.0 / std::sqrt(std::abs(jet[2]));
  const double ph = detail::phase(jet[0], t, m, phi2) - std::numbers::pi / 4;
  const double ratio = (1.0 - std::cos(phi2)) / jet[0];
  const double pre = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
  const double a = pre * (decay + amp * std::cos(ph));
  const double b = pre * ((1.0 - std::cosh(y)) / cp.w * decay + amp * ratio * std::sin(ph));
  return {j, t, a, b, WindingMethod::quadrature, 0.0};
}

// The exponentially small part of the cut contribution alone (for decay checks).
inline double critical_tail_cut_magnitude(int j, double t, const ModelParams& p) {
  const double g = p.gamma();
  const double m = static_cast<double>(j) * p.n_sites();
  const double target = m / t;
  const double ybr = std::acosh((1.0 + g * g) / (1.0 - g * g));
  double lo = 1e-12 * ybr, hi = ybr * (1.0 - 1e-15);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::cut_eval(mid, g).w1 > target)
      lo = mid;
    else
      hi = mid;
  }
  const double y = 0.5 * (lo + hi);
  const auto cp = detail::cut_eval(y, g);
  return 0.5 / std::sqrt(2.0 * std::numbers::pi * t * std::abs(cp.w2)) * std::exp(-cp.w * t + m * y);
}

inline SuppressionEstimate suppression_estimate(int j, double t, const ModelParams& p) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("suppression needs j >= 1");
  const auto d = threshold_data(p);
  const double tj = j * d.t_th;
  if (!(t < tj)) throw InvalidParameter("suppression needs t < j t_th");
  const double e3 = std::abs(d.jet[3]);
  if (e3 < 1e-10) throw RegimeError("suppression law needs E'''(phi0) != 0");
  const double m = static_cast<double>(j) * p.n_sites();
  const double r = d.vel.v_max / e3;
  const double delta = (tj - t) / tj;
  const double x = m * std::pow(delta, 1.5);
  const double log_mag = -2.0 / 3.0 * std::sqrt(2.0 * r) * x;
  if (x > 1.0) {
    const double ph = detail::phase(d.jet[0], t, m, d.vel.phi0);
    const double pre = std::pow(r, 0.25) / (std::pow(2.0, 0.75) * std::sqrt(std::numbers::pi * m)) * std::pow(delta, -0.25);
    return {log_mag, pre * std::exp(log_mag) * std::cos(ph), false};
  }
  using C = std::complex<double>;
  const C phi1 = saddle_solve(j, t, p).phi1;
  const auto jet = energy_jet(phi1, p);
  const C cph = jet[0] * t - m * phi1;
  const double re = std::remainder(cph.real(), 2.0 * std::numbers::pi);
  const double pre = std::tgamma(1.0 / 3.0) * std::cbrt(r) /
                     (std::pow(2.0, 2.0 / 3.0) * std::pow(3.0, 1.0 / 6.0) * std::numbers::pi * std::cbrt(m)) *
                     std::cbrt(e3 * d.t_th / (std::abs(jet[3]) * t));
  return {log_mag, pre * std::cos(re) * std::exp(-std::abs(cph.imag())), true};
}

inline double revival_peak_prediction(int j, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j < 1) throw InvalidParameter("revival prediction needs j >= 1");
  const double g = p.gamma(), b = g * g;
  const double m = static_cast<double>(j) * p.n_sites();
  if (detail::is_h_one(p, o) && std::abs(b - 0.75) <= o.critical_eps) {
    const double a5 = gai_max(5).value;
    return std::pow(36.0 / m, 0.4) * a5 * a5;
  }
  const double a3 = gai_max(3).value;
  if (detail::is_h_one(p, o) && b > 0.75) return std::pow(2.0 * b / ((b - 0.75) * m), 2.0 / 3.0) * a3 * a3;
  const auto d = threshold_data(p);
  const double e3 = std::abs(d.jet[3]);
  return 4.0 * std::pow(2.0 / (e3 * j * d.t_th), 2.0 / 3.0) * (1.0 + std::abs(d.eps0 / d.jet[0] - 1.0)) * a3 * a3;
}

inline RegimeSelector select_regime(int j, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (j == 0) {
    const bool far = p.h() - 1.0 > o.critical_eps;
    return {far ? Regime::zero_far : Regime::zero_critical, 0, t, 0.0, 0.0};
  }
  const auto d = threshold_data(p);
  const double center = j * d.t_th;
  const double w = detail::airy_half_width(d, p.n_sites(), t, o);
  const double b = p.gamma() * p.gamma();
  if (detail::is_h_one(p, o)) {
    if (std::abs(b - 0.75) <= o.critical_eps) return {Regime::airy_critical_boundary, j, t, center, w};
    if (b > 0.75) return {Regime::airy_critical_gamma_large, j, t, center, w};
    if (p.gamma() > 0.0 && t > j * p.n_sites() / p.gamma()) return {Regime::critical_tail, j, t, center, w};
  }
  if (t < center - w) return {Regime::suppressed, j, t, center, w};
  if (t <= center + w) return {Regime::airy_generic, j, t, center, w};
  return {Regime::saddle, j, t, center, w};
}

inline WindingTerm regime_term(const RegimeSelector& sel, const ModelParams& p, const AsymptoticOptions& o = {}) {
  switch (sel.regime) {
    case Regime::zero_far: {
      const auto z = zero_order_terms(sel.t, p, o);
      return {0, sel.t, z.a0, z.b0, WindingMethod::quadrature, 0.0};
    }
    case Regime::zero_critical: {
      const auto z = zero_order_critical_terms(sel.t, p, o);
      return {0, sel.t, z.a0, z.b0, WindingMethod::quadrature, 0.0};
    }
    case Regime::saddle: return stationary_phase_term(sel.j, sel.t, p, o);
    case Regime::airy_generic:
    case Regime::suppressed: return airy_term(sel.j, sel.t, p, o);
    case Regime::airy_critical_gamma_large: return airy_critical_large_gamma(sel.j, sel.t, p, o);
    case Regime::airy_critical_boundary: return airy_critical_boundary(sel.j, sel.t, p, o);
    case Regime::critical_tail: return critical_tail_term(sel.j, sel.t, p, o);
  }
  throw RegimeError("unknown regime");
}

// Zero-order terms, stationary phase for completed windings and the Airy
// form around the active one, combined like the truncated winding series.
inline double composite_g(int s, double t, const ModelParams& p, const AsymptoticOptions& o = {}) {
  detail::require_domain(p);
  if (s < 0) throw InvalidParameter("truncation order must be non-negative");
  const double eps = p.h() - 1.0;
  if (s > 0 && !(eps > p.gamma() / p.n_sites() * o.eps_margin) && !(p.gamma() == 0.0 && eps > 0.0))
    throw RegimeError("composite form rejects h - 1 <~ gamma/N (regime not covered)");
  std::vector<WindingTerm> terms;
  terms.reserve(s + 1);
  for (int j = 0; j <= s; ++j) {
    const auto sel = select_regime(j, t, p, o);
    try {
      terms.push_back(regime_term(sel, p, o));
    } catch (const RegimeError& e) {
      throw RegimeError("composite: " + detail::window_tag(j, t) + " [" + regime_name(sel.regime) + "]: " + e.what());
    }
  }
  return series_sums(terms, s).g();
}

}  // namespace xychain
