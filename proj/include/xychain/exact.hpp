#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "xychain/model.hpp"
#include "xychain/numeric.hpp"
#include "xychain/trace.hpp"

namespace xychain {

struct ModeSums {
  double a_odd = 0.0, a_ev = 0.0;
  double b_odd = 0.0, b_ev = 0.0;
  double c_odd = 0.0, c_ev = 0.0;

  double g() const {
    return 0.5 * (a_odd * a_odd + a_ev * a_ev + b_odd * b_odd + b_ev * b_ev - c_odd * c_odd - c_ev * c_ev);
  }
};

// Per-mode tables for fixed (params, n); evaluation at any t is O(N).
// Uses the signed h and gamma, so the sign symmetries are tested, not assumed.
class ModeSumEvaluator {
 public:
  ModeSumEvaluator(const ModelParams& p, int n) : n_sites_(p.n_sites()) {
    if (n < 0 || n >= n_sites_) throw InvalidParameter("site offset must satisfy 0 <= n < N");
    const double h = p.signed_h(), g = p.signed_gamma();
    const int nn = n_sites_;
    for (int s = 0; s < 2; ++s) {
      auto& modes = sets_[s];
      modes.reserve(nn);
      // twice the momentum: odd set 2q = -N+2, ..., N; even set 2q = -N+1, ..., N-1
      const int first = s == 0 ? -nn + 2 : -nn + 1;
      for (int k = 0; k < nn; ++k) {
        const long long twice_q = first + 2LL * k;
        const double phi = std::numbers::pi * static_cast<double>(twice_q) / nn;
        const double eps = h - std::cos(phi);
        const double gc = g * std::sin(phi);
        const double e = std::hypot(eps, gc);
        // n*phi = pi*(n*2q)/N, reduced exactly in integers
        long long m = (static_cast<long long>(n) * twice_q) % (2LL * nn);
        if (m < 0) m += 2LL * nn;
        const double ang = std::numbers::pi * static_cast<double>(m) / nn;
        Mode md{};
        md.energy = e;
        md.eps_ratio = e > 0.0 ? eps / e : 0.0;
        md.gamma_ratio = e > 0.0 ? gc / e : 0.0;
        md.cos_n = n == 0 ? 1.0 : std::cos(ang);
        md.sin_n = n == 0 ? 0.0 : std::sin(ang);
        modes.push_back(md);
      }
    }
  }

  ModeSums sums(double t) const {
    std::array<double, 6> out{};
    for (int s = 0; s < 2; ++s) {
      numeric::CompensatedSum a, b, c;
      for (const auto& md : sets_[s]) {
        const auto cs = numeric::cos_sin_product(md.energy, t);
        a += md.cos_n * cs.c;
        b += md.eps_ratio * md.cos_n * cs.s;
        c += md.gamma_ratio * md.sin_n * cs.s;
      }
      out[3 * s + 0] = a.value() / n_sites_;
      out[3 * s + 1] = b.value() / n_sites_;
      out[3 * s + 2] = c.value() / n_sites_;
    }
    return {out[0], out[3], out[1], out[4], out[2], out[5]};
  }

  double g(double t) const { return sums(t).g(); }

 private:
  struct Mode {
    double energy, eps_ratio, gamma_ratio, cos_n, sin_n;
  };
  int n_sites_;
  std::array<std::vector<Mode>, 2> sets_;
};

inline ModeSums mode_sums(int n, double t, const ModelParams& p) { return ModeSumEvaluator(p, n).sums(t); }

inline double g_zz(int n, double t, const ModelParams& p) { return ModeSumEvaluator(p, n).g(t); }

inline CorrelationTrace exact_trace(const ModelParams& p, int n, const std::vector<double>& times, int threads = 1) {
  const ModeSumEvaluator ev(p, n);
  CorrelationTrace tr{p, n, times, {}, Route::exact_mode_sum, 0};
  tr.values = numeric::parallel_map(times.size(), threads, [&](std::size_t i) { return ev.g(times[i]); });
  return tr;
}

struct LongTimeAverage {
  double value;
  bool degenerate;
};

inline LongTimeAverage long_time_average(const ModelParams& p) {
  const int nn = p.n_sites();
  numeric::CompensatedSum cos2;
  std::vector<double> energies;
  for (Parity par : {Parity::odd, Parity::even}) {
    const auto set = momentum_set(par, p);
    for (std::size_t k = 0; k < set.q.size(); ++k) {
      const double c = std::cos(bogolyubov_angle(set.q[k], p));
      cos2 += c * c;
      if (set.q[k] >= 0.0) energies.push_back(dispersion(set.phi[k], p).energy);
    }
  }
  std::sort(energies.begin(), energies.end());
  bool degenerate = false;
  for (std::size_t k = 1; k < energies.size(); ++k)
    if (energies[k] - energies[k - 1] < 1e-10) degenerate = true;
  const double inv = 1.0 / nn;
  return {inv * (1.0 - inv + 0.5 * inv * cos2.value()), degenerate};
}

// Polarization profile p_m(t) after polarizing site source_site at t = 0.
inline std::vector<double> snapshot(double t, int source_site, const ModelParams& p) {
  const int nn = p.n_sites();
  if (source_site < 0 || source_site >= nn) throw InvalidParameter("source site out of range");
  std::vector<double> dist(nn / 2 + 1);
  for (int d = 0; d <= nn / 2; ++d) dist[d] = g_zz(d, t, p);
  std::vector<double> out(nn);
  for (int m = 0; m < nn; ++m) {
    const int off = ((m - source_site) % nn + nn) % nn;
    out[m] = dist[std::min(off, nn - off)];
  }
  return out;
}

}  // namespace xychain
