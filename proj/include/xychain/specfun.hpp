#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/airy.hpp>

#include "xychain/error.hpp"
#include "xychain/numeric.hpp"

namespace xychain {

namespace detail {

// Leading Debye estimate of ln J_n(x) for n > x > 0; only used to skip
// orders that certainly underflow.
inline double bessel_log_estimate(double n, double x) {
  const double r = x / n;
  const double t = std::sqrt((1.0 - r) * (1.0 + r));
  return n * (t - std::atanh(t)) - 0.5 * std::log(2.0 * std::numbers::pi * n * t);
}

inline bool bessel_underflows(int n, double x) {
  if (n <= x + 10.0) return false;
  return bessel_log_estimate(n, x) < -700.0;
}

}  // namespace detail

// J_n(x) for every requested order, one backward (Miller) sweep normalized by
// J_0 + 2 sum J_2k = 1. Negative orders and arguments are mapped by parity.
inline std::vector<double> bessel_j_many(const std::vector<int>& orders, double x) {
  std::vector<double> out(orders.size(), 0.0);
  if (orders.empty()) return out;
  const bool neg_x = x < 0.0;
  const double ax = std::abs(x);
  auto sign_of = [&](int n) {
    const int m = std::abs(n);
    int s = 1;
    if (n < 0 && (m & 1)) s = -s;
    if (neg_x && (m & 1)) s = -s;
    return s;
  };
  if (ax == 0.0) {
    for (std::size_t i = 0; i < orders.size(); ++i) out[i] = orders[i] == 0 ? 1.0 : 0.0;
    return out;
  }

  int nmax = -1;
  for (int n : orders) {
    const int m = std::abs(n);
    if (!detail::bessel_underflows(m, ax)) nmax = std::max(nmax, m);
  }
  if (nmax < 0) return out;

  double start = std::max<double>(nmax, ax) + 20.0 + 16.0 * std::cbrt(ax);
  int big_m = static_cast<int>(std::ceil(start));
  if (big_m & 1) ++big_m;

  // value and rescale count at the time it was stored
  std::vector<double> val(nmax + 1, 0.0);
  std::vector<int> cnt(nmax + 1, 0);
  std::vector<char> want(nmax + 1, 0);
  for (int n : orders) {
    const int m = std::abs(n);
    if (m <= nmax && !detail::bessel_underflows(m, ax)) want[m] = 1;
  }

  constexpr int kShift = 800;
  int scale = 0;
  double f_next = 0.0;
  double f = 1.0;
  double sum = 0.0;
  for (int k = big_m; k >= 1; --k) {
    const double f_prev = (2.0 * k / ax) * f - f_next;
    f_next = f;
    f = f_prev;
    const int km1 = k - 1;
    if (km1 % 2 == 0) sum += (km1 == 0 ? 1.0 : 2.0) * f;
    if (km1 <= nmax && want[km1]) {
      val[km1] = f;
      cnt[km1] = scale;
    }
    if (std::abs(f) > 1e240) {
      f = std::ldexp(f, -kShift);
      f_next = std::ldexp(f_next, -kShift);
      sum = std::ldexp(sum, -kShift);
      ++scale;
    }
  }
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const int m = std::abs(orders[i]);
    if (m > nmax || !want[m]) continue;
    const double v = std::ldexp(val[m] / sum, -kShift * (scale - cnt[m]));
    out[i] = sign_of(orders[i]) * v;
  }
  return out;
}

inline double bessel_j(int n, double x) { return bessel_j_many({n}, x)[0]; }

inline double bessel_j_prime(int n, double x) {
  const auto v = bessel_j_many({n - 1, n + 1}, x);
  return 0.5 * (v[0] - v[1]);
}

inline double airy_ai(double x) { return boost::math::airy_ai(x); }
inline double airy_ai_prime(double x) { return boost::math::airy_ai_prime(x); }

namespace detail {

struct GaiValue {
  double value;
  double derivative;
};

// (1/pi) int_0^inf exp(i(xi^n/n + x xi)) dxi, real axis up to R then the ray
// R + r e^{i pi/(2n)}.
inline GaiValue gai_eval(int n, double x) {
  if (n < 3 || n % 2 == 0) throw InvalidParameter("generalized Airy order must be odd and >= 3");
  const auto& gl = numeric::GL16::get();
  const double nn = n;

  double R = 0.0;
  if (x < 0.0) R = 1.25 * std::pow(-x, 1.0 / (nn - 1.0)) + 0.5;

  numeric::CompensatedSum re_v, re_d;
  if (R > 0.0) {
    const double fmax = std::max(std::abs(x), std::pow(R, nn - 1.0) + x);
    const int panels = static_cast<int>(std::ceil(R * std::max(fmax, 1.0) / 2.0)) + 1;
    const double w = R / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * w;
      double sv = 0.0, sd = 0.0;
      for (int k = 0; k < 16; ++k) {
        const double xi = mid + 0.5 * w * gl.x[k];
        const double ph = std::pow(xi, nn) / nn + x * xi;
        sv += gl.w[k] * std::cos(ph);
        sd -= gl.w[k] * xi * std::sin(ph);
      }
      re_v += 0.5 * w * sv;
      re_d += 0.5 * w * sd;
    }
  }

  const std::complex<double> omega = std::polar(1.0, std::numbers::pi / (2.0 * nn));
  const std::complex<double> I(0.0, 1.0);
  auto phase = [&](std::complex<double> xi) {
    std::complex<double> pw = 1.0;
    for (int k = 0; k < n; ++k) pw *= xi;
    return pw / nn + x * xi;
  };
  double r = 0.0;
  for (int guard = 0; guard < 200000; ++guard) {
    const std::complex<double> xi0 = R + r * omega;
    const double decay = phase(xi0).imag();
    if (decay > 40.0) break;
    const double speed = std::pow(std::abs(xi0) + 0.5, nn - 1.0) + std::abs(x);
    const double w = std::min(2.0 / std::max(speed, 1e-3), 0.5);
    double sv = 0.0, sd = 0.0;
    for (int k = 0; k < 16; ++k) {
      const std::complex<double> xi = R + (r + 0.5 * w * (1.0 + gl.x[k])) * omega;
      const std::complex<double> e = std::exp(I * phase(xi)) * omega;
      sv += gl.w[k] * e.real();
      sd += gl.w[k] * (I * xi * e).real();
    }
    re_v += 0.5 * w * sv;
    re_d += 0.5 * w * sd;
    r += w;
  }
  return {re_v.value() / std::numbers::pi, re_d.value() / std::numbers::pi};
}

}  // namespace detail

inline double gai(int n, double x) { return detail::gai_eval(n, x).value; }
inline double gai_prime(int n, double x) { return detail::gai_eval(n, x).derivative; }

struct FunctionMax {
  double x;
  double value;
};

namespace detail {

template <class F>
FunctionMax maximize_on(F&& f, double lo, double hi, int samples) {
  double best_x = lo, best = f(lo);
  const double step = (hi - lo) / samples;
  for (int i = 1; i <= samples; ++i) {
    const double xx = lo + i * step;
    const double v = f(xx);
    if (v > best) {
      best = v;
      best_x = xx;
    }
  }
  double a = best_x - step, b = best_x + step;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace detail

// Global maximum of gAi_n on the real line (it sits just left of the origin).
inline FunctionMax gai_max(int n) {
  if (n == 3) {
    static const FunctionMax m3 = detail::maximize_on([](double x) { return airy_ai(x); }, -4.0, 1.0, 500);
    return m3;
  }
  if (n == 5) {
    static const FunctionMax m5 = detail::maximize_on([](double x) { return gai(5, x); }, -4.0, 1.0, 500);
    return m5;
  }
  return detail::maximize_on([n](double x) { return gai(n, x); }, -4.0, 1.0, 500);
}

}  // namespace xychain
