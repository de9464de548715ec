#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace xychain::numeric {

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// a*b reduced into (-pi, pi], carrying the rounding error of the product.
inline double reduced_phase(double a, double b) {
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  if (std::abs(p) < 3.0) return p + err;
  const double k = std::nearbyint(p / two_pi_hi);
  double r = std::fma(-k, two_pi_hi, p);
  r = std::fma(-k, two_pi_lo, r);
  return r + err;
}

struct CosSin {
  double c;
  double s;
};

inline CosSin cos_sin_product(double a, double b) {
  const double x = reduced_phase(a, b);
  return {std::cos(x), std::sin(x)};
}

template <int M>
struct GaussLegendre {
  std::array<double, M> x{};
  std::array<double, M> w{};

  GaussLegendre() {
    for (int i = 0; i < (M + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (M + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= M; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = M * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-17) break;
      }
      x[i] = -z;
      x[M - 1 - i] = z;
      w[i] = w[M - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule;
    return rule;
  }
};

using GL16 = GaussLegendre<16>;

// Roots of sum_k c[k] z^k. Leading coefficients below tol * max|c| are dropped.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> c, double tol = 1e-14) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (!c.empty() && std::abs(c.back()) <= tol * scale) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

template <class T>
T polyval(const std::vector<double>& c, T z) {
  T acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

template <class T>
T polyder_val(const std::vector<double>& c, T z) {
  T acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) acc = acc * z + double(k) * c[k];
  return acc;
}

template <class T>
T newton_polish(const std::vector<double>& c, T z, int iters = 8) {
  for (int i = 0; i < iters; ++i) {
    const T d = polyder_val(c, z);
    if (std::abs(d) == 0.0) break;
    const T step = polyval(c, z) / d;
    const T next = z - step;
    if (!(std::abs(polyval(c, next)) <= std::abs(polyval(c, z)))) break;
    z = next;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
  }
  return z;
}

struct Peak {
  double x;
  double y;
};

// Vertex of the parabola through (x-h, y0), (x, y1), (x+h, y2), clamped to one step.
inline Peak quadratic_peak(double x, double h, double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom < 0.0)) return {x, y1};
  double u = 0.5 * (y0 - y2) / denom;
  u = std::clamp(u, -1.0, 1.0);
  return {x + u * h, y1 + 0.5 * u * (y2 - y0) + 0.5 * u * u * denom};
}

// Ordered parallel map over [0, n); each slot is written by exactly one worker.
template <class F>
auto parallel_map(std::size_t n, int threads, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace xychain::numeric
