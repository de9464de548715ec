#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xychain/xychain.hpp"

using json = nlohmann::ordered_json;
using namespace xychain;

namespace {

struct RunConfig {
  std::string subcommand;
  int n_sites = 100;
  double h = 1.5;
  double gamma = 0.5;
  int site = 0;
  std::string tmin = "0";
  std::string tmax = "1tth";
  std::string dt = "0.1";
  std::string t = "1tth";
  int source = 0;
  int j = 1;
  int s = -1;  // -1: default truncation floor(t/t_th) + 1
  std::string method = "auto";
  std::string regime = "auto";
  std::string format = "csv";
  std::string out;
  int threads = 1;
  double airy_widths = 3.0;
  double eps_margin = 10.0;
  double far_margin = 10.0;
  double large_gamma_margin = 10.0;
  double boundary_margin = 10.0;
  double dgamma = 0.0;
  double dh = 0.0;
  int jmax = 5;
  int fit_min = 1;
  int fit_max = -1;
  int points = 201;
  std::string set = "grid";
  bool compare = false;
  unsigned seed = 12345;
  int cases = 5;
  std::vector<double> h_scan;

  AsymptoticOptions options() const {
    AsymptoticOptions o;
    o.airy_widths = airy_widths;
    o.eps_margin = eps_margin;
    o.far_margin = far_margin;
    o.large_gamma_margin = large_gamma_margin;
    o.boundary_margin = boundary_margin;
    return o;
  }
};

#define XY_FIELDS(X)                                                                                              \
  X(subcommand) X(n_sites) X(h) X(gamma) X(site) X(tmin) X(tmax) X(dt) X(t) X(source) X(j) X(s) X(method)        \
  X(regime) X(format) X(out) X(threads) X(airy_widths) X(eps_margin) X(far_margin) X(large_gamma_margin)        \
  X(boundary_margin) X(dgamma) X(dh) X(jmax) X(fit_min) X(fit_max) X(points) X(set) X(compare) X(seed) X(cases) \
  X(h_scan)

json config_to_json(const RunConfig& c) {
  json m;
  m["version"] = version;
#define XY_PUT(f) m[#f] = c.f;
  XY_FIELDS(XY_PUT)
#undef XY_PUT
  return m;
}

void config_from_json(const json& m, RunConfig& c) {
#define XY_GET(f) \
  if (m.contains(#f)) m.at(#f).get_to(c.f);
  XY_FIELDS(XY_GET)
#undef XY_GET
}

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string cell_csv(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (auto i = std::get_if<long long>(&c)) return json(*i);
  return json(std::get<std::string>(c));
}

void emit(const RunConfig& cfg, const Table& tab) {
  std::ostringstream os;
  if (cfg.format == "json") {
    json doc;
    doc["meta"] = config_to_json(cfg);
    for (auto& [k, v] : tab.extra.items()) doc["meta"][k] = v;
    doc["columns"] = tab.columns;
    json data = json::array();
    for (const auto& row : tab.rows) {
      json r = json::array();
      for (const auto& c : row) r.push_back(cell_json(c));
      data.push_back(r);
    }
    doc["data"] = data;
    os << doc.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < tab.columns.size(); ++i) os << (i ? "," : "") << tab.columns[i];
    os << "\n";
    for (const auto& row : tab.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
      os << "\n";
    }
  }
  if (cfg.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw InvalidParameter("cannot open output file " + cfg.out);
    f << os.str();
  }
}

// "12.5" or "3tth" (multiples of the threshold time).
double parse_time(const std::string& s, const ModelParams& p) {
  std::string num = s;
  double scale = 1.0;
  if (num.size() > 3 && num.compare(num.size() - 3, 3, "tth") == 0) {
    num.resize(num.size() - 3);
    scale = threshold_time(p);
    if (!std::isfinite(scale)) throw InvalidParameter("t_th is infinite for these parameters");
  }
  double v = 0.0;
  auto r = std::from_chars(num.data(), num.data() + num.size(), v);
  if (r.ec != std::errc() || r.ptr != num.data() + num.size()) throw InvalidParameter("bad time value '" + s + "'");
  return v * scale;
}

std::vector<double> time_grid(const RunConfig& c, const ModelParams& p) {
  const double lo = parse_time(c.tmin, p), hi = parse_time(c.tmax, p), dt = parse_time(c.dt, p);
  if (!(hi > lo)) throw InvalidParameter("need tmax > tmin");
  return uniform_grid(lo, hi, dt);
}

ModelParams params_of(const RunConfig& c) { return ModelParams(c.n_sites, c.h, c.gamma); }

Table run_dispersion(const RunConfig& c) {
  const auto p = params_of(c);
  Table tab;
  tab.columns = {"phi", "energy", "epsilon", "gamma_comp", "theta", "velocity"};
  auto row = [&](double phi) {
    const auto sp = dispersion(phi, p);
    tab.rows.push_back({sp.phi, sp.energy, sp.epsilon, sp.gamma_comp, sp.theta, sp.velocity});
  };
  if (c.set == "grid") {
    if (c.points < 2) throw InvalidParameter("need at least 2 points");
    for (int k = 0; k < c.points; ++k) row(std::numbers::pi * k / (c.points - 1));
  } else if (c.set == "odd" || c.set == "even") {
    for (double phi : momentum_set(c.set == "odd" ? Parity::odd : Parity::even, p).phi) row(phi);
  } else {
    throw InvalidParameter("set must be grid, odd or even");
  }
  return tab;
}

Table run_velocity(const RunConfig& c) {
  const auto p = params_of(c);
  const auto v = max_group_velocity(p);
  Table tab;
  tab.columns = {"V", "phi0", "t_th", "boundary"};
  tab.rows.push_back({v.v_max, v.phi0, c.n_sites * v.t_th_per_site, static_cast<long long>(v.boundary_flag)});
  return tab;
}

Table run_exact(const RunConfig& c) {
  const auto p = params_of(c);
  const auto times = time_grid(c, p);
  const auto tr = exact_trace(p, c.site, times, c.threads);
  Table tab;
  tab.columns = {"t", "g"};
  for (std::size_t i = 0; i < times.size(); ++i) tab.rows.push_back({times[i], tr.values[i]});
  return tab;
}

Table run_snapshot(const RunConfig& c) {
  const auto p = params_of(c);
  const auto prof = snapshot(parse_time(c.t, p), c.source, p);
  Table tab;
  tab.columns = {"m", "p"};
  for (std::size_t m = 0; m < prof.size(); ++m) tab.rows.push_back({static_cast<long long>(m), prof[m]});
  return tab;
}

SeriesMethod series_method(const std::string& m) {
  if (m == "auto") return SeriesMethod::automatic;
  if (m == "quadrature") return SeriesMethod::quadrature;
  if (m == "closed") return SeriesMethod::closed;
  throw InvalidParameter("method must be auto, quadrature or closed");
}

Table run_winding(const RunConfig& c) {
  const auto p = params_of(c);
  const auto times = time_grid(c, p);
  const auto m = series_method(c.method);
  if (c.j < 0) throw InvalidParameter("j must be non-negative");
  const auto all = numeric::parallel_map(times.size(), c.threads, [&](std::size_t i) {
    if (m == SeriesMethod::quadrature) return winding_terms_quad(c.j, times[i], p);
    return winding_terms(c.j, times[i], p, m);
  });
  Table tab;
  tab.columns = {"t", "j", "A", "B", "method", "error_estimate"};
  for (const auto& terms : all)
    for (const auto& w : terms)
      tab.rows.push_back({w.t, static_cast<long long>(w.j), w.a, w.b, method_name(w.method), w.error_estimate});
  return tab;
}

Table run_series(const RunConfig& c) {
  const auto p = params_of(c);
  const auto times = time_grid(c, p);
  const auto m = series_method(c.method);
  std::optional<ModeSumEvaluator> ev;
  if (c.compare) ev.emplace(p, 0);
  const auto rows = numeric::parallel_map(times.size(), c.threads, [&](std::size_t i) {
    const int s = c.s >= 0 ? c.s : default_truncation(times[i], p);
    const double g = g_series(s, times[i], p, m);
    return std::vector<Cell>{times[i], static_cast<long long>(s), g, ev ? ev->g(times[i]) : NAN};
  });
  Table tab;
  tab.columns = {"t", "s", "g"};
  if (c.compare) tab.columns.push_back("g_exact");
  for (auto r : rows) {
    if (!c.compare) r.pop_back();
    tab.rows.push_back(r);
  }
  return tab;
}

std::optional<Regime> parse_regime(const std::string& s) {
  if (s == "auto") return std::nullopt;
  for (Regime r : {Regime::zero_far, Regime::zero_critical, Regime::saddle, Regime::airy_generic,
                   Regime::airy_critical_gamma_large, Regime::airy_critical_boundary, Regime::suppressed,
                   Regime::critical_tail})
    if (regime_name(r) == s) return r;
  throw InvalidParameter("unknown regime '" + s + "'");
}

Table run_asympt(const RunConfig& c) {
  const auto p = params_of(c);
  const auto times = time_grid(c, p);
  const auto o = c.options();
  const auto forced = parse_regime(c.regime);
  Table tab;
  if (!forced && c.s >= 0) {
    const auto g = numeric::parallel_map(times.size(), c.threads, [&](std::size_t i) { return composite_g(c.s, times[i], p, o); });
    tab.columns = {"t", "g"};
    for (std::size_t i = 0; i < times.size(); ++i) tab.rows.push_back({times[i], g[i]});
    return tab;
  }
  const auto rows = numeric::parallel_map(times.size(), c.threads, [&](std::size_t i) {
    auto sel = select_regime(c.j, times[i], p, o);
    if (forced) sel.regime = *forced;
    const auto w = regime_term(sel, p, o);
    return std::vector<Cell>{times[i], static_cast<long long>(c.j), regime_name(sel.regime), w.a, w.b};
  });
  tab.columns = {"t", "j", "regime", "A", "B"};
  tab.rows = rows;
  return tab;
}

Table run_revivals(const RunConfig& c) {
  const auto p = params_of(c);
  const double t_th = threshold_time(p);
  const double dt = parse_time(c.dt, p);
  const auto grid = revival_window_grid(t_th, 1, c.jmax, dt);
  const auto tr = exact_trace(p, 0, grid, c.threads);
  auto rep = detect_revivals(tr, t_th, c.jmax);
  Table tab;
  const int fmax = c.fit_max < 0 ? c.jmax : c.fit_max;
  rep = with_fit(rep, c.fit_min, fmax);
  tab.extra["t_th"] = t_th;
  tab.extra["slope"] = rep.fitted_exponent;
  tab.extra["slope_stderr"] = rep.exponent_stderr;
  tab.columns = {"j", "t_peak", "height", "predicted"};
  for (const auto& pk : rep.peaks) {
    double pred = NAN;
    try {
      pred = revival_peak_prediction(pk.j, p, c.options());
    } catch (const RegimeError&) {
    }
    tab.rows.push_back({static_cast<long long>(pk.j), pk.t_peak, pk.height, pred});
  }
  return tab;
}

Table run_suppression(const RunConfig& c) {
  const auto p = params_of(c);
  const auto times = time_grid(c, p);
  const auto rows = numeric::parallel_map(times.size(), c.threads, [&](std::size_t i) {
    const auto e = suppression_estimate(c.j, times[i], p);
    const double aq = c.compare ? winding_term_quad(c.j, times[i], p).a : NAN;
    return std::vector<Cell>{times[i], e.log_magnitude, e.a_approx, static_cast<long long>(e.near_transition), aq};
  });
  Table tab;
  tab.columns = {"t", "log_magnitude", "a_approx", "near_transition"};
  if (c.compare) tab.columns.push_back("a_quadrature");
  for (auto r : rows) {
    if (!c.compare) r.pop_back();
    tab.rows.push_back(r);
  }
  return tab;
}

Table run_sensitivity(const RunConfig& c) {
  Table tab;
  if (!c.h_scan.empty()) {
    tab.columns = {"h", "baseline", "mean_abs_diff", "ratio"};
    for (double h : c.h_scan) {
      RunConfig cc = c;
      cc.h = h;
      const auto p = params_of(cc);
      const auto st = sensitivity(p, c.dgamma, c.dh, time_grid(cc, p), c.threads);
      const double m = st.mean_over(-INFINITY, INFINITY);
      tab.rows.push_back({h, st.baseline, m, m / st.baseline});
    }
    return tab;
  }
  const auto p = params_of(c);
  const auto st = sensitivity(p, c.dgamma, c.dh, time_grid(c, p), c.threads);
  tab.extra["baseline"] = st.baseline;
  tab.columns = {"t", "abs_diff", "baseline"};
  for (std::size_t i = 0; i < st.times.size(); ++i) tab.rows.push_back({st.times[i], st.abs_diff[i], st.baseline});
  return tab;
}

Table run_selfcheck(const RunConfig& c, bool& ok) {
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uh(-2.5, 2.5), ug(-1.2, 1.2);
  Table tab;
  tab.columns = {"N", "n", "h", "gamma", "t", "exact", "dense", "abs_diff"};
  ok = true;
  for (int nn : {4, 6, 8}) {
    for (int k = 0; k < c.cases; ++k) {
      const ModelParams p(nn, uh(rng), ug(rng));
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const DenseEvolution dense(p, t);
        for (int n : {0, 1, 2}) {
          const double a = g_zz(n, t, p), b = dense.g(n);
          const double d = std::abs(a - b);
          if (!(d < 1e-8)) ok = false;
          tab.rows.push_back({static_cast<long long>(nn), static_cast<long long>(n), p.signed_h(), p.signed_gamma(), t, a, b, d});
        }
      }
    }
  }
  tab.extra["passed"] = ok;
  return tab;
}

// Pulls "--config FILE" out of argv and loads it.
std::optional<json> take_config(std::vector<std::string>& args) {
  std::optional<json> cfg;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      continue;
    }
    std::ifstream f(path);
    if (!f) throw InvalidParameter("cannot read config " + path);
    json doc = json::parse(f);
    cfg = doc.contains("meta") ? doc["meta"] : doc;
    break;
  }
  return cfg;
}

const std::vector<std::string> subcommands = {"dispersion", "velocity",    "exact",       "snapshot",
                                              "winding",    "series",      "asympt",      "revivals",
                                              "suppression", "sensitivity", "selfcheck"};

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--N", c.n_sites, "chain length (even)");
  sub->add_option("--h", c.h, "transverse field");
  sub->add_option("--gamma", c.gamma, "anisotropy");
  sub->add_option("--n", c.site, "site offset");
  sub->add_option("--tmin", c.tmin, "grid start (number or <x>tth)");
  sub->add_option("--tmax", c.tmax, "grid end (number or <x>tth)");
  sub->add_option("--dt", c.dt, "grid step (number or <x>tth)");
  sub->add_option("--t", c.t, "single time (snapshot)");
  sub->add_option("--source", c.source, "polarized site (snapshot)");
  sub->add_option("--j", c.j, "winding number");
  sub->add_option("--s", c.s, "truncation order (-1: floor(t/t_th)+1)");
  sub->add_option("--method", c.method, "auto|quadrature|closed");
  sub->add_option("--regime", c.regime, "auto or a regime name");
  sub->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--airy-widths", c.airy_widths);
  sub->add_option("--eps-margin", c.eps_margin);
  sub->add_option("--far-margin", c.far_margin);
  sub->add_option("--large-gamma-margin", c.large_gamma_margin);
  sub->add_option("--boundary-margin", c.boundary_margin);
  sub->add_option("--dgamma", c.dgamma, "gamma perturbation");
  sub->add_option("--dh", c.dh, "field perturbation");
  sub->add_option("--jmax", c.jmax, "last revival window");
  sub->add_option("--fit-min", c.fit_min);
  sub->add_option("--fit-max", c.fit_max);
  sub->add_option("--points", c.points, "phi grid points (dispersion)");
  sub->add_option("--set", c.set, "grid|odd|even (dispersion)");
  sub->add_flag("--compare", c.compare, "add the reference column");
  sub->add_option("--seed", c.seed);
  sub->add_option("--cases", c.cases, "random (h, gamma) per N (selfcheck)");
  sub->add_option("--h-scan", c.h_scan, "field values to scan (sensitivity)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (auto meta = take_config(args)) {
      config_from_json(*meta, cfg);
      const bool has_sub = std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end();
      });
      if (!has_sub && !cfg.subcommand.empty()) args.insert(args.begin(), cfg.subcommand);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Spin autocorrelation of the cyclic XY chain"};
  app.set_help_flag("--help", "show help");
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  for (const auto& name : subcommands) add_common(app.add_subcommand(name), cfg);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "velocity" && !app.get_subcommands().front()->count("--format") &&
      cfg.format == "csv" && cfg.out.empty())
    cfg.format = "json";

  try {
    Table tab;
    bool ok = true;
    const auto& s = cfg.subcommand;
    if (s == "dispersion") tab = run_dispersion(cfg);
    else if (s == "velocity") tab = run_velocity(cfg);
    else if (s == "exact") tab = run_exact(cfg);
    else if (s == "snapshot") tab = run_snapshot(cfg);
    else if (s == "winding") tab = run_winding(cfg);
    else if (s == "series") tab = run_series(cfg);
    else if (s == "asympt") tab = run_asympt(cfg);
    else if (s == "revivals") tab = run_revivals(cfg);
    else if (s == "suppression") tab = run_suppression(cfg);
    else if (s == "sensitivity") tab = run_sensitivity(cfg);
    else tab = run_selfcheck(cfg, ok);
    emit(cfg, tab);
    if (!ok) {
      std::cerr << "selfcheck failed\n";
      return 1;
    }
  } catch (const RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
