#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "xychain/error.hpp"
#include "xychain/numeric.hpp"

namespace xychain {

// Chain size N, field h, anisotropy gamma. Stored canonicalized (|h|, |gamma|);
// the signed inputs stay available for formula-level symmetry checks.
class ModelParams {
 public:
  ModelParams(int n_sites, double h, double gamma) : n_(n_sites), h_in_(h), g_in_(gamma) {
    if (n_sites % 2 != 0) throw InvalidParameter("N must be even");
    if (n_sites < 4) throw InvalidParameter("N must be at least 4");
    if (!std::isfinite(h) || !std::isfinite(gamma)) throw InvalidParameter("h and gamma must be finite");
  }

  int n_sites() const { return n_; }
  double h() const { return std::abs(h_in_); }
  double gamma() const { return std::abs(g_in_); }
  double signed_h() const { return h_in_; }
  double signed_gamma() const { return g_in_; }
  double epsilon() const { return h() - 1.0; }

  ModelParams with_h(double h) const { return {n_, h, g_in_}; }
  ModelParams with_gamma(double g) const { return {n_, h_in_, g}; }
  ModelParams with_n(int n) const { return {n, h_in_, g_in_}; }

  bool asymptotic_domain() const { return h() >= 1.0 && gamma() <= 1.0; }

 private:
  int n_;
  double h_in_;
  double g_in_;
};

struct SpectrumPoint {
  double phi;
  double energy;
  double epsilon;
  double gamma_comp;
  double theta;
  double velocity;
};

enum class Parity { odd, even };

struct MomentumSet {
  Parity parity;
  std::vector<double> q;
  std::vector<double> phi;
};

struct VelocityExtremum {
  double v_max;
  double phi0;
  double t_th_per_site;
  bool boundary_flag;
};

namespace detail {

template <class T>
T dcos(int k, T c, T s) {
  switch (k & 3) {
    case 0: return c;
    case 1: return -s;
    case 2: return -c;
    default: return s;
  }
}

}  // namespace detail

// E and its first five derivatives; T is double or std::complex<double>
// (principal square root for the continuation).
template <class T>
std::array<T, 6> energy_jet(T phi, double h, double gamma) {
  using std::cos, std::sin, std::sqrt;
  const double b = gamma * gamma;
  const double a = 1.0 - b;
  const T c1 = cos(phi), s1 = sin(phi);
  const T c2 = cos(2.0 * phi), s2 = sin(2.0 * phi);
  std::array<T, 6> f{};
  f[0] = h * h + b - 2.0 * h * c1 + a * c1 * c1;
  double pow2 = 1.0;
  for (int k = 1; k <= 5; ++k) {
    pow2 *= 2.0;
    f[k] = -2.0 * h * detail::dcos(k, c1, s1) + 0.5 * a * pow2 * detail::dcos(k, c2, s2);
  }
  constexpr int binom[6][6] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}, {1, 5, 10, 10, 5, 1}};
  std::array<T, 6> e{};
  e[0] = sqrt(f[0]);
  for (int n = 1; n <= 5; ++n) {
    T acc = f[n];
    for (int k = 1; k < n; ++k) acc -= double(binom[n][k]) * e[k] * e[n - k];
    e[n] = acc / (2.0 * e[0]);
  }
  return e;
}

template <class T>
std::array<T, 6> energy_jet(T phi, const ModelParams& p) {
  return energy_jet(phi, p.h(), p.gamma());
}

template <class T>
T energy(T phi, const ModelParams& p) {
  using std::cos, std::sqrt;
  const double h = p.h(), b = p.gamma() * p.gamma();
  const T c = cos(phi);
  return sqrt(h * h + b - 2.0 * h * c + (1.0 - b) * c * c);
}

inline double group_velocity(double phi, double h, double gamma) {
  const double eps = h - std::cos(phi);
  const double gc = gamma * std::sin(phi);
  const double e = std::hypot(eps, gc);
  if (e == 0.0) return 0.0;  // two-sided limits differ; report the mean
  return (h - (1.0 - gamma * gamma) * std::cos(phi)) * std::sin(phi) / e;
}

inline double group_velocity(double phi, const ModelParams& p) { return group_velocity(phi, p.h(), p.gamma()); }

inline double bogolyubov_angle_at(double phi, double h, double gamma) {
  const double eps = h - std::cos(phi);
  const double gc = gamma * std::sin(phi);
  if (eps == 0.0) return gc == 0.0 ? 0.0 : std::copysign(std::numbers::pi / 2, gc);
  return std::atan(gc / eps);
}

inline SpectrumPoint dispersion(double phi, const ModelParams& p) {
  SpectrumPoint s{};
  s.phi = phi;
  s.epsilon = p.h() - std::cos(phi);
  s.gamma_comp = p.gamma() * std::sin(phi);
  s.energy = std::hypot(s.epsilon, s.gamma_comp);
  s.theta = bogolyubov_angle_at(phi, p.h(), p.gamma());
  s.velocity = group_velocity(phi, p);
  return s;
}

inline double dispersion_derivative(double phi, int order, const ModelParams& p) {
  if (order < 1 || order > 5) throw InvalidParameter("derivative order must be in 1..5");
  const auto jet = energy_jet(phi, p);
  if (jet[0] < 1e-12) throw DegenerateSpectrum("E(phi) vanishes; derivative undefined");
  if (order == 1) return group_velocity(phi, p);
  return jet[order];
}

inline MomentumSet momentum_set(Parity parity, const ModelParams& p) {
  const int n = p.n_sites();
  MomentumSet m{parity, {}, {}};
  m.q.reserve(n);
  m.phi.reserve(n);
  const double start = parity == Parity::odd ? -n / 2 + 1.0 : -n / 2 + 0.5;
  for (int k = 0; k < n; ++k) {
    const double q = start + k;
    m.q.push_back(q);
    m.phi.push_back(2.0 * std::numbers::pi * q / n);
  }
  return m;
}

inline double bogolyubov_angle(double q, const ModelParams& p) {
  const int n = p.n_sites();
  const double twice = 2.0 * q;
  if (twice != std::round(twice) || q <= -n / 2.0 || q > n / 2.0)
    throw InvalidParameter("momentum not in a momentum set of this chain");
  if (q == 0.0) return p.h() >= 1.0 ? 0.0 : std::numbers::pi;
  if (q == n / 2.0) return 0.0;
  return bogolyubov_angle_at(2.0 * std::numbers::pi * q / n, p.h(), p.gamma());
}

// Quartic in z = cos(phi0) for the velocity extremum, ascending coefficients.
inline std::vector<double> velocity_quartic(double h, double gamma) {
  const double b = gamma * gamma;
  const double a = 1.0 - b;
  return {-b * a + h * h * b, -h * (h * h + b), 2.0 * b * a + h * h * (3.0 - 2.0 * b), -3.0 * h * a, a * a};
}

inline VelocityExtremum max_group_velocity(const ModelParams& p) {
  const double h = p.h(), g = p.gamma();
  if (std::abs(h - 1.0) <= 1e-12 && g * g >= 0.75 - 1e-12 && g <= 1.0)
    return {g, 0.0, 1.0 / g, true};

  const auto coeffs = velocity_quartic(h, g);
  double best_v = -1.0, best_phi = std::numbers::pi / 2;
  auto consider = [&](double phi) {
    const double e = std::hypot(h - std::cos(phi), g * std::sin(phi));
    double v;
    if (e < 1e-12) {
      constexpr double d = 1e-8;
      v = std::max(group_velocity(phi + d, h, g), group_velocity(phi - d, h, g));
    } else {
      v = group_velocity(phi, h, g);
    }
    if (v > best_v) {
      best_v = v;
      best_phi = phi;
    }
  };
  for (auto r : numeric::polynomial_roots(coeffs)) {
    if (std::abs(r.imag()) > 1e-4 * (1.0 + std::abs(r))) continue;
    double z = numeric::newton_polish(coeffs, r.real(), 20);
    if (std::abs(z) > 1.0 + 1e-9) continue;
    z = std::clamp(z, -1.0, 1.0);
    consider(std::acos(z));
  }
  if (best_v < 0.0) {
    // P vanishes identically (h = 0, gamma = 1): flat band.
    consider(std::numbers::pi / 2);
  }
  if (std::abs(h - 1.0) <= 1e-12 && g > best_v) return {g, 0.0, 1.0 / g, true};
  if (best_v <= 0.0) return {0.0, best_phi, std::numeric_limits<double>::infinity(), false};
  return {best_v, best_phi, 1.0 / best_v, false};
}

inline double threshold_time(const ModelParams& p) {
  return p.n_sites() * max_group_velocity(p).t_th_per_site;
}

// Zeros of E in the upper half plane on the imaginary axis (k = 0 images).
inline std::pair<std::complex<double>, std::complex<double>> branch_points(const ModelParams& p) {
  const double h = p.h(), g = p.gamma();
  const double b = g * g;
  if (h * h <= 1.0 - b) throw DomainError("branch points need h^2 > 1 - gamma^2");
  if (std::abs(1.0 - b) < 1e-14) throw DegenerateSpectrum("branch point formula degenerates at gamma = 1");
  const double root = g * std::sqrt(h * h - 1.0 + b);
  const std::complex<double> i(0.0, 1.0);
  const auto plus = i * std::acosh(std::complex<double>((h + root) / (1.0 - b)));
  const auto minus = i * std::acosh(std::complex<double>((h - root) / (1.0 - b)));
  return {plus, minus};
}

}  // namespace xychain
