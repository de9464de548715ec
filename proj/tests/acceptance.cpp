// One PASS/FAIL line per acceptance criterion. Usage: acceptance [--criterion k]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <string>

#include "xychain/xychain.hpp"

using namespace xychain;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  auto check = [&](double h, double g, double v_ref) {
    worst = std::max(worst, std::abs(max_group_velocity(ModelParams(100, h, g)).v_max - v_ref));
  };
  for (double h : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) check(h, 0, 1);
  check(2, 1, 1);
  check(0, 0.3, 0.7);
  check(1, 0.9, 0.9);
  const auto b = max_group_velocity(ModelParams(100, 1, 0.9));
  check(1, std::sqrt(2 - std::sqrt(2.0)), 0.8284271247461901);
  const double dt = seconds_since(t0);
  const bool ok = worst < 1e-9 && b.phi0 == 0.0 && b.boundary_flag && dt < 1;
  return {ok, fmt("max |V - V_table| = %.2e, boundary phi0 = %g, %.3f s", worst, b.phi0, dt)};
}

Outcome c2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double t = threshold_time(ModelParams(100, 1, std::sqrt(std::sqrt(2.0) - 1)));
  const double dt = seconds_since(t0);
  return {std::abs(t - 117.7) <= 0.1 && dt < 1, fmt("t_th = %.6f, %.3f s", t, dt)};
}

Outcome c3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uh(-2.5, 2.5), ug(-1.2, 1.2);
  double worst = 0;
  int count = 0;
  for (int nn : {4, 6, 8})
    for (int k = 0; k < 20; ++k) {
      const ModelParams p(nn, uh(rng), ug(rng));
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const DenseEvolution dense(p, t);
        for (int n : {0, 1, 2}) {
          worst = std::max(worst, std::abs(g_zz(n, t, p) - dense.g(n)));
          ++count;
        }
      }
    }
  const double dt = seconds_since(t0);
  return {worst < 1e-8 && dt < 30, fmt("%d comparisons, max diff %.2e, %.1f s", count, worst, dt)};
}

Outcome c4() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p(100, 1.3, 0);
  double wq = 0;
  for (double t = 0; t <= 300; t += 0.5) {
    const auto q = winding_terms_quad(2, t, p);
    const auto c = winding_terms_closed(2, t, p);
    for (int j = 0; j <= 2; ++j) wq = std::max({wq, std::abs(q[j].a - c[j].a), std::abs(q[j].b - c[j].b)});
  }
  const ModeSumEvaluator ev(p, 0);
  double ws = 0, t_bad = -1;
  for (double t = 0; t < 10.9 * 100; t += 0.5) {
    const double e = std::abs(g_series(10, t, p) - ev.g(t));
    if (e > ws) ws = e;
    if (e >= 1e-6 && t_bad < 0) t_bad = t;
  }
  const double dt = seconds_since(t0);
  return {wq < 1e-8 && ws < 1e-6 && dt < 120,
          fmt("quad vs Bessel %.2e; series(10) vs exact max %.2e (first >= 1e-6 at t = %.1f), %.1f s", wq, ws, t_bad, dt)};
}

Outcome c5() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p(100, 1, 1);
  double w = 0;
  for (double t = 0; t <= 250; t += 0.5) {
    const auto q = winding_terms_quad(1, t, p);
    for (int j = 0; j <= 1; ++j) {
      const double a = bessel_j(2 * j * 100, 2 * t), b = -bessel_j_prime(2 * j * 100, 2 * t);
      w = std::max({w, std::abs(q[j].a - a), std::abs(q[j].b - b)});
    }
  }
  const double dt = seconds_since(t0);
  return {w < 1e-8 && dt < 60, fmt("max diff %.2e, %.1f s", w, dt)};
}

Outcome c6() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p(100, 1.5, 0.5);
  const double tth = threshold_time(p);
  const ModeSumEvaluator ev(p, 0);
  std::string d;
  bool ok = true;
  for (int s = 0; s <= 5; ++s) {
    double w = 0;
    for (double t = 0; t < (s + 1) * tth - 5; t += 0.5) w = std::max(w, std::abs(g_series(s, t, p) - ev.g(t)));
    ok = ok && w < 1e-6;
    d += fmt("s=%d:%.1e ", s, w);
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 300, d + fmt("(%.1f s)", dt)};
}

Outcome c7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uh(0, 3), ug(-1, 1), uu(0, 1);
  double lowest = 1;
  for (int k = 0; k < 10; ++k) {
    const ModelParams p(100, uh(rng), ug(rng));
    const double tmax = 50 * threshold_time(p);
    const ModeSumEvaluator ev(p, 0);
    for (int i = 0; i < 10000; ++i) lowest = std::min(lowest, ev.g(uu(rng) * tmax));
  }
  return {lowest >= -1e-12, fmt("min g over 1e5 samples = %.3e", lowest)};
}

Outcome c8() {
  std::string d;
  bool ok = true;
  for (const ModelParams& p : {ModelParams(100, 2, 0), ModelParams(100, 1.5, 0.5)}) {
    const ModeSumEvaluator ev(p, 0);
    numeric::CompensatedSum s;
    int n = 0;
    for (double t = 1e4; t <= 2e4; t += 0.1, ++n) s += ev.g(t);
    const double num = s.value() / n, lta = long_time_average(p).value;
    const double rel = std::abs(num / lta - 1);
    ok = ok && rel < 0.05;
    d += fmt("(h=%g,g=%g) formula %.5f numeric %.5f rel %.3f; ", p.h(), p.gamma(), lta, num, rel);
  }
  return {ok, d};
}

Outcome c9() {
  const ModelParams p(100, 2, 0.5);
  const double tth = threshold_time(p);
  const ModeSumEvaluator ev(p, 0);
  // envelope = max over a window of one period (pi) of the cos^2 factor
  double worst = 0;
  const double half = std::numbers::pi / 2;
  for (double c = 20 + half; c <= 0.9 * tth - half; c += 1.0) {
    double ex = 0, ap = 0;
    for (double t = c - half; t <= c + half; t += 0.01) {
      ex = std::max(ex, ev.g(t));
      ap = std::max(ap, zero_order_far(t, p).g);
    }
    worst = std::max(worst, std::abs(ap / ex - 1));
  }
  const ModelParams q(400, 1, 0.2);
  const double crit = std::abs(zero_order_critical(200, q) / g_zz(0, 200, q) - 1);
  return {worst < 0.05 && crit < 0.03, fmt("zero-order envelope max rel err %.4f; critical form rel err %.2e", worst, crit)};
}

Outcome c10() {
  const ModelParams p(100, 2, 0.5);
  const double tth = threshold_time(p);
  double qmax = 0, amax = 0;
  for (double t = tth - 15; t < tth + 15; t += 0.02) {
    const auto q = winding_term_quad(1, t, p);
    const auto a = airy_term(1, t, p);
    qmax = std::max(qmax, q.a * q.a + q.b * q.b);
    amax = std::max(amax, a.a * a.a + a.b * a.b);
  }
  const double peak_rel = std::abs(amax / qmax - 1);
  const ModeSumEvaluator ev(p, 0);
  double fifth = 0;
  for (double t = 4.75 * tth; t <= 5.25 * tth; t += 0.05) fifth = std::max(fifth, ev.g(t));
  double err = 0;
  for (double t = 4.2 * tth; t <= 5.8 * tth; t += 0.1) err = std::max(err, std::abs(composite_g(5, t, p) - ev.g(t)));
  return {peak_rel < 0.02 && err < 0.1 * fifth,
          fmt("Airy peak rel err %.4f; composite max err %.2e vs 0.1 x 5th revival height %.2e", peak_rel, err, 0.1 * fifth)};
}

Outcome c11() {
  const ModelParams p(100, 2, 0.5);
  const auto d = threshold_data(p);
  const int j = 2;
  const double t = j * d.t_th * 0.9;
  // local envelope of |A| over a few carrier periods
  double env = 0;
  for (double s = -3; s <= 3; s += 0.01) env = std::max(env, std::abs(winding_term_quad(j, t + s, p).a));
  const double measured = std::log(env);
  const auto est = suppression_estimate(j, t, p);
  const double rel = std::abs(measured / est.log_magnitude - 1);
  const double with_prefactor = std::log(std::abs(est.a_approx) > 0 ? std::abs(est.a_approx) : 1e-300);
  return {rel < 0.15, fmt("ln|A| = %.3f, predicted exponent %.3f (rel %.2f); prefactor-resolved estimate ln|a| = %.3f",
                          measured, est.log_magnitude, rel, with_prefactor)};
}

Outcome c12() {
  const auto t0 = std::chrono::steady_clock::now();
  auto slope = [](const ModelParams& p, int j0, int j1) {
    const double tth = threshold_time(p);
    const auto tr = exact_trace(p, 0, revival_window_grid(tth, 1, j1, 0.1));
    return with_fit(detect_revivals(tr, tth, j1), j0, j1);
  };
  const auto a = slope(ModelParams(1000, 1.5, 0.5), 2, 12);
  const auto b = slope(ModelParams(2000, 1, std::sqrt(0.75)), 2, 10);
  const double dt = seconds_since(t0);
  const bool oka = std::abs(a.fitted_exponent + 2.0 / 3.0) <= 0.05;
  const bool okb = std::abs(b.fitted_exponent + 0.4) <= 0.05;
  return {oka && okb && dt < 900, fmt("generic slope %.4f +- %.4f (%s); boundary slope %.4f +- %.4f (%s); %.1f s",
                                      a.fitted_exponent, a.exponent_stderr, oka ? "ok" : "off", b.fitted_exponent,
                                      b.exponent_stderr, okb ? "ok" : "off", dt)};
}

Outcome c13() {
  double w = 0;
  for (double x = -10; x <= 5; x += 0.05) w = std::max(w, std::abs(gai(3, x) - airy_ai(x)));
  const auto m5 = gai_max(5), m3 = gai_max(3);
  const bool ok = w < 1e-8 && std::abs(m5.value - 0.44) <= 0.01 && std::abs(m3.value - 0.54) <= 0.01;
  return {ok, fmt("max |gai3 - Ai| = %.2e; max gai5 = %.10f at %.5f; max Ai = %.10f at %.5f", w, m5.value, m5.x,
                  m3.value, m3.x)};
}

Outcome c14() {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> uh(-3, 3), ug(-1.3, 1.3), ut(0, 400);
  double w = 0;
  for (int k = 0; k < 50; ++k) {
    const int nn = 2 * (2 + k % 30);
    const double h = uh(rng), g = ug(rng), t = ut(rng);
    const int n = k % nn;
    const ModelParams p(nn, h, g);
    const double v = g_zz(n, t, p);
    w = std::max(w, std::abs(v - g_zz((nn - n) % nn, t, p)));
    w = std::max(w, std::abs(v - g_zz(n, t, ModelParams(nn, h, -g))));
    w = std::max(w, std::abs(v - g_zz(n, t, ModelParams(nn, -h, g))));
    w = std::max(w, std::abs(g_zz(n, t, ModelParams(nn, h, 0)) - g_zz(n, t, ModelParams(nn, 0.37 * h + 1, 0))));
  }
  return {w < 1e-10, fmt("max deviation %.2e over 50 configurations", w)};
}

Outcome c15() {
  const ModelParams p(100, 1, 0.5);
  const double tth = threshold_time(p);
  const auto st = sensitivity(p, 0.005, 0, uniform_grid(0, 10 * tth, 0.1));
  const double early = st.mean_over(0, 0.8 * tth) / st.baseline;
  const double late = st.mean_over(5 * tth, 10 * tth) / st.baseline;
  bool mono = true;
  double prev = 0;
  std::string w;
  for (int k = 0; k < 4; ++k) {
    const double m = st.mean_over(std::max(0.0, (k - 0.2) * tth), (k + 0.8) * tth);
    mono = mono && m >= 0.9 * prev;
    prev = m;
    w += fmt("%.2e ", m);
  }
  return {early < 0.1 && late >= 0.5 && late <= 2 && mono,
          fmt("early/baseline %.4f, late/baseline %.3f, windows %s", early, late, w.c_str())};
}

const std::function<Outcome()> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14, c15};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0) only = std::atoi(argv[i + 1]);
  if (only < 0 || only > 15) {
    std::fprintf(stderr, "criterion must be 1..15\n");
    return 2;
  }
  bool all = true;
  for (int k = 1; k <= 15; ++k) {
    if (only && k != only) continue;
    Outcome o{false, ""};
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
