#include "cnoidal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "cnoidal/dynamics.hpp"
#include "cnoidal/riemann_theta.hpp"
#include "cnoidal/soliton_gas.hpp"

#ifndef CNOIDAL_VERSION
#define CNOIDAL_VERSION "0.0.0"
#endif

namespace cnoidal::cli {

using nlohmann::json;

const char* tool_version() { return CNOIDAL_VERSION; }

namespace {

double number(const json& j, const char* key, double fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("field '") + key + "' is not finite");
  return d;
}

double required(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing field '") + key + "'");
  return number(j, key, 0.0);
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

SpectralKind parse_kind(const json& j) {
  if (!j.contains("kind")) throw ConfigError("spectral entry given by beta needs 'kind'");
  auto k = j.at("kind");
  if (k == "hot") return SpectralKind::hot;
  if (k == "cool") return SpectralKind::cool;
  throw ConfigError("kind must be \"hot\" or \"cool\"");
}

std::vector<double> number_list(const json& j, const char* key, std::vector<double> fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(std::string("field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(std::string("field '") + key + "' not finite");
  }
  return out;
}

const json& section(const RunConfig& cfg, const char* key) {
  static const json empty = json::object();
  if (!cfg.raw.contains(key)) return empty;
  const auto& s = cfg.raw.at(key);
  if (!s.is_object()) throw ConfigError(std::string("section '") + key + "' must be an object");
  return s;
}

double tolerance(const RunConfig& cfg, const char* key, double fallback) {
  if (cfg.tol >= 0) return cfg.tol;
  return number(section(cfg, "tolerances"), key, fallback);
}

std::string kind_text(SpectralKind k) { return kind_name(k); }

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  cfg.raw = j;
  if (!j.contains("curve")) throw ConfigError("missing section 'curve'");
  const auto& c = j.at("curve");
  cfg.e1 = required(c, "e1");
  cfg.e2 = required(c, "e2");
  cfg.e3 = required(c, "e3");
  if (j.contains("solitons")) {
    if (!j.at("solitons").is_array()) throw ConfigError("'solitons' must be an array");
    for (const auto& s : j.at("solitons")) {
      SolitonEntry e;
      bool has_b = s.contains("b"), has_beta = s.contains("beta");
      if (has_b == has_beta) throw ConfigError("each soliton needs exactly one of 'b' or 'beta'");
      if (has_b) {
        e.b = required(s, "b");
      } else {
        e.from_b = false;
        e.beta = required(s, "beta");
        e.kind = parse_kind(s);
      }
      e.x_shift = number(s, "x_shift", 0.0);
      cfg.solitons.push_back(e);
    }
  }
  cfg.x0 = number(j, "x0", 0.0);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid.xmin = number(g, "xmin", cfg.grid.xmin);
    cfg.grid.xmax = number(g, "xmax", cfg.grid.xmax);
    cfg.grid.nx = integer(g, "nx", cfg.grid.nx);
    cfg.grid.tmin = number(g, "tmin", cfg.grid.tmin);
    cfg.grid.tmax = number(g, "tmax", cfg.grid.tmax);
    cfg.grid.nt = integer(g, "nt", cfg.grid.nt);
  }
  if (cfg.grid.nx < 2 || cfg.grid.nt < 2) throw ConfigError("grid needs nx >= 2 and nt >= 2");
  if (!(cfg.grid.xmax > cfg.grid.xmin) || cfg.grid.tmax < cfg.grid.tmin)
    throw ConfigError("grid ranges are empty or reversed");
  cfg.radius = integer(j, "radius", cfg.radius);
  if (cfg.radius < 1) throw ConfigError("radius must be >= 1");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tolerances") && !j.at("tolerances").is_object())
    throw ConfigError("'tolerances' must be an object");
  return cfg;
}

json resolved_json(const RunConfig& cfg) {
  json j = cfg.raw;
  j["curve"] = {{"e1", cfg.e1}, {"e2", cfg.e2}, {"e3", cfg.e3}};
  json sol = json::array();
  for (const auto& s : cfg.solitons) {
    if (s.from_b)
      sol.push_back({{"b", s.b}, {"x_shift", s.x_shift}});
    else
      sol.push_back({{"beta", s.beta}, {"kind", kind_text(s.kind)}, {"x_shift", s.x_shift}});
  }
  j["solitons"] = sol;
  j["x0"] = cfg.x0;
  j["grid"] = {{"xmin", cfg.grid.xmin}, {"xmax", cfg.grid.xmax}, {"nx", cfg.grid.nx},
               {"tmin", cfg.grid.tmin}, {"tmax", cfg.grid.tmax}, {"nt", cfg.grid.nt}};
  j["radius"] = cfg.radius;
  j["seed"] = cfg.seed;
  if (cfg.tol >= 0) j["tol_override"] = cfg.tol;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return format_double(*d);
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& os, const Table& t, const std::string& command, const json& config) {
  os << "# cnoidal-kdv " << tool_version() << "\n";
  os << "# command: " << command << "\n";
  os << "# config: " << config.dump() << "\n";
  for (const auto& n : t.notes) os << "# " << n << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\n";
  }
  for (const auto& [k, v] : t.footer) os << "# " << k << ": " << cell_text(v) << "\n";
}

void write_json(std::ostream& os, const Table& t, const std::string& command, const json& config) {
  json j;
  j["tool"] = "cnoidal-kdv";
  j["version"] = tool_version();
  j["command"] = command;
  j["config"] = config;
  j["notes"] = t.notes;
  j["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(r);
  }
  j["rows"] = rows;
  json f = json::object();
  for (const auto& [k, v] : t.footer) f[k] = cell_json(v);
  j["footer"] = f;
  os << j.dump(2) << "\n";
}

Built build(const RunConfig& cfg) {
  auto split = split_trace(cfg.e1, cfg.e2, cfg.e3);
  Built b;
  b.curve = half_periods(split.e1, split.e2, split.e3);
  b.galilean_v = split.v;
  std::vector<JacobianPoint> pts;
  std::vector<double> shifts;
  for (const auto& s : cfg.solitons) {
    pts.push_back(s.from_b ? invert_wp(s.b - split.v / 3.0, b.curve)
                           : jacobian_point(s.beta, s.kind, b.curve));
    shifts.push_back(s.x_shift);
  }
  b.spectrum = build_spectrum(b.curve, pts, shifts);
  return b;
}

Outcome cmd_eval(const RunConfig& cfg) {
  auto b = build(cfg);
  TauContext ctx(b.curve, b.spectrum, cfg.x0, b.galilean_v);
  const auto& g = cfg.grid;
  auto u = ctx.u_grid(g);
  Outcome o;
  o.table.columns = {"x", "t", "u", "tau", "detG"};
  for (int k = 0; k < g.nt; ++k)
    for (int i = 0; i < g.nx; ++i) {
      double x = g.x(i), t = g.t(k);
      o.table.rows.push_back({x, t, u[static_cast<std::size_t>(k) * g.nx + i], ctx.tau(x, t),
                              std::exp(ctx.log_det(x, t))});
    }
  o.table.footer.push_back({"period", b.curve.period()});
  o.table.footer.push_back({"solitons", static_cast<long long>(b.spectrum.size())});
  return o;
}

namespace {

Outcome verify_pde(const RunConfig& cfg) {
  auto b = build(cfg);
  TauContext ctx(b.curve, b.spectrum, cfg.x0, b.galilean_v);
  double tol = tolerance(cfg, "pde", 1e-3);
  double r = kdv_residual(ctx, cfg.grid);
  Outcome o;
  o.passed = r < tol;
  o.table.columns = {"check", "parameter", "value", "residual", "tolerance", "pass"};
  o.table.rows.push_back({std::string("pde"), std::string("solitons"),
                          static_cast<long long>(b.spectrum.size()), r, tol,
                          std::string(o.passed ? "pass" : "fail")});
  return o;
}

std::vector<Complex> complex_list(const json& sec, const char* key, std::size_t n, Complex fallback) {
  if (!sec.contains(key)) return std::vector<Complex>(n, fallback);
  const auto& v = sec.at(key);
  if (!v.is_array() || v.size() != n)
    throw ConfigError(std::string("'") + key + "' must list one [re, im] pair per soliton");
  std::vector<Complex> out;
  for (const auto& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError(std::string("'") + key + "' entries must be [re, im]");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

Outcome verify_degeneration(const RunConfig& cfg) {
  auto b = build(cfg);
  const auto& sec = section(cfg, "verify");
  auto eps = number_list(sec, "epsilons", {1e-2, 1e-4, 1e-6});
  auto psi = complex_list(sec, "psi", b.spectrum.size(), Complex(0.0, 5.0));
  double beta = number(sec, "beta", 0.2);
  double tol = tolerance(cfg, "degeneration", 1e-5);
  Outcome o;
  o.table.columns = {"check", "parameter", "value", "residual", "tolerance", "pass"};
  double prev = INFINITY;
  bool monotone = true;
  for (double e : eps) {
    double r = degeneration_residual(psi, beta, b.spectrum, b.curve, e, cfg.radius);
    bool down = r < prev;
    monotone = monotone && down;
    prev = r;
    o.table.rows.push_back({std::string("degeneration"), std::string("epsilon"), e, r, tol,
                            std::string(down ? "pass" : "fail")});
  }
  o.passed = monotone && prev < tol;
  o.table.footer.push_back({"monotone", std::string(monotone ? "yes" : "no")});
  o.table.footer.push_back({"final_below_tolerance", std::string(prev < tol ? "yes" : "no")});
  return o;
}

Outcome verify_fay(const RunConfig& cfg) {
  auto b = build(cfg);
  const auto& sec = section(cfg, "verify");
  int n = integer(sec, "n", 3), configs = integer(sec, "configs", 50);
  if (n < 1 || configs < 1) throw ConfigError("fay check needs n >= 1 and configs >= 1");
  double tol = tolerance(cfg, "fay", 1e-9);
  std::mt19937_64 rng(cfg.seed);
  Outcome o;
  o.table.columns = {"check", "parameter", "value", "residual", "tolerance", "pass"};
  for (int k = 0; k < configs; ++k) {
    auto f = sample_fay_configuration(n, b.curve, rng);
    double r = fay_residual(f.x, f.xhat, f.E, b.curve);
    bool ok = r < tol;
    o.passed = o.passed && ok;
    o.table.rows.push_back({std::string("fay"), std::string("configuration"),
                            static_cast<long long>(k), r, tol, std::string(ok ? "pass" : "fail")});
  }
  o.table.notes.push_back("fay n = " + std::to_string(n));
  return o;
}

Outcome verify_montecarlo(const RunConfig& cfg) {
  auto b = build(cfg);
  const auto& sec = section(cfg, "verify");
  auto eps = number_list(sec, "epsilons", {1e-2, 1e-3, 1e-4});
  int draws = integer(sec, "draws", 200);
  double threshold = number(sec, "threshold", 1e-3);
  PhaseTrialSetup setup;
  setup.radius = cfg.radius;
  setup.t = number(sec, "t", 0.0);
  double xmin = number(sec, "xmin", -5.0), xmax = number(sec, "xmax", 5.0);
  int nx = integer(sec, "nx", 41);
  if (nx < 2 || draws < 1) throw ConfigError("montecarlo needs nx >= 2 and draws >= 1");
  for (int i = 0; i < nx; ++i) setup.xs.push_back(xmin + (xmax - xmin) * i / (nx - 1));
  auto mc = monte_carlo_phases(b.spectrum, b.curve, eps, draws, cfg.seed, setup, threshold);
  Outcome o;
  o.table.columns = {"check", "epsilon", "mean_deviation", "fraction_below", "pass"};
  double prev = INFINITY;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    bool down = mc.mean_deviation[k] < prev;
    o.passed = o.passed && down;
    prev = mc.mean_deviation[k];
    o.table.rows.push_back({std::string("montecarlo"), eps[k], mc.mean_deviation[k],
                            mc.fraction_below[k], std::string(down ? "pass" : "fail")});
  }
  o.table.footer.push_back({"draws", static_cast<long long>(draws)});
  o.table.footer.push_back({"threshold", threshold});
  return o;
}

}  // namespace

Outcome cmd_verify(const RunConfig& cfg, const std::string& which) {
  Outcome o;
  if (which == "pde")
    o = verify_pde(cfg);
  else if (which == "degeneration")
    o = verify_degeneration(cfg);
  else if (which == "fay")
    o = verify_fay(cfg);
  else if (which == "montecarlo")
    o = verify_montecarlo(cfg);
  else
    throw ConfigError("unknown check '" + which + "'");
  o.table.footer.push_back({"result", std::string(o.passed ? "pass" : "fail")});
  return o;
}

Outcome cmd_dynamics(const RunConfig& cfg, const std::string& mode) {
  auto b = build(cfg);
  const auto& c = b.curve;
  const auto& s = b.spectrum;
  const double drift = 2.0 * b.galilean_v;
  Outcome o;
  if (mode == "velocity") {
    o.table.columns = {"beta", "kind", "V", "P", "E"};
    o.table.notes.push_back("beta is Re beta; P and E are imaginary parts");
    for (std::size_t j = 0; j < s.size(); ++j)
      o.table.rows.push_back({s.points[j].rho(), kind_text(s.points[j].kind),
                              group_velocity(s.points[j], c) + drift, s.P[j].imag(), s.E[j].imag()});
  } else if (mode == "shifts") {
    auto sch = total_shift_schedule(s, c);
    o.table.columns = {"index", "beta", "kind", "V", "shift"};
    for (std::size_t j = 0; j < s.size(); ++j)
      o.table.rows.push_back({static_cast<long long>(j), s.points[j].rho(),
                              kind_text(s.points[j].kind), s.velocity(j) + drift, sch[j]});
  } else if (mode == "track") {
    const auto& sec = section(cfg, "dynamics");
    int j = integer(sec, "soliton", 0);
    if (j < 0 || j >= static_cast<int>(s.size())) throw ConfigError("dynamics.soliton out of range");
    double norming, offset;
    if (sec.contains("norming")) {
      norming = number(sec, "norming", 1.0);
      offset = number(sec, "phase_offset", 0.0);
      if (!(norming > 0)) throw ConfigError("dynamics.norming must be positive");
    } else {
      int side = integer(sec, "side", -1);
      if (side != -1 && side != 1) throw ConfigError("dynamics.side must be -1 or 1");
      auto r = asymptotic_reduction(s, c, j, side, cfg.x0);
      norming = r.norming;
      offset = r.phase_offset;
    }
    o.table.columns = {"t", "Phi", "center"};
    o.table.notes.push_back("center = x_j + V t + Phi");
    for (int k = 0; k < cfg.grid.nt; ++k) {
      double t = cfg.grid.t(k);
      auto p = track_phase(s.points[j], c, norming, t, offset);
      o.table.rows.push_back({t, p.phi, s.x_shift[j] + p.center + drift * t});
    }
    o.table.footer.push_back({"norming", norming});
    o.table.footer.push_back({"phase_offset", offset});
  } else {
    throw ConfigError("unknown dynamics mode '" + mode + "'");
  }
  return o;
}

namespace {

std::function<double(double)> polynomial(const json& v, const char* what) {
  std::vector<double> coef;
  if (v.is_number()) {
    coef.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(std::string(what) + " coefficients must be numbers");
      coef.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(std::string(what) + " must be a number or coefficient list");
  }
  if (coef.empty()) throw ConfigError(std::string(what) + " has no coefficients");
  return [coef](double z) {
    double acc = 0.0;
    for (auto it = coef.rbegin(); it != coef.rend(); ++it) acc = acc * z + *it;
    return acc;
  };
}

GasModel gas_model(const RunConfig& cfg, const CurveParams& c, double v) {
  const auto& sec = section(cfg, "gas");
  GasModel m;
  if (!sec.contains("support") || !sec.at("support").is_array())
    throw ConfigError("gas.support must be an array");
  for (const auto& s : sec.at("support")) {
    if (s.contains("b")) {
      auto bs = number_list(s, "b", {});
      if (bs.size() != 2) throw ConfigError("gas.support b interval needs two endpoints");
      auto p = invert_wp(bs[0] - v / 3.0, c), q = invert_wp(bs[1] - v / 3.0, c);
      if (p.kind != q.kind) throw ConfigError("gas.support b interval crosses a gap");
      m.support.push_back({std::min(p.rho(), q.rho()), std::max(p.rho(), q.rho()), p.kind});
    } else {
      auto r = number_list(s, "beta", {});
      if (r.size() != 2) throw ConfigError("gas.support entries need 'beta': [a, b] or 'b': [lo, hi]");
      m.support.push_back({r[0], r[1], parse_kind(s)});
    }
  }
  m.nodes_per_interval = integer(sec, "nodes", 33);
  if (m.support.empty()) return m;
  if (sec.contains("sigma")) {
    auto f = polynomial(sec.at("sigma"), "gas.sigma");
    m.sigma = [f](const JacobianPoint& p) { return f(p.rho()); };
  } else if (sec.contains("phi") && sec.contains("nu")) {
    auto phi = polynomial(sec.at("phi"), "gas.phi");
    auto nu = polynomial(sec.at("nu"), "gas.nu");
    m.sigma = sigma_from_density(nu, phi, c);
  } else {
    throw ConfigError("gas needs 'sigma' or both 'phi' and 'nu'");
  }
  return m;
}

}  // namespace

Outcome cmd_gas(const RunConfig& cfg, bool double_nodes) {
  auto split = split_trace(cfg.e1, cfg.e2, cfg.e3);
  auto c = half_periods(split.e1, split.e2, split.e3);
  const double drift = 2.0 * split.v;
  GasModel m = gas_model(cfg, c, split.v);
  Outcome o;
  o.table.columns = {"eta", "kind", "u", "v", "s", "s0"};
  o.table.notes.push_back("eta is Re eta");
  if (m.support.empty()) {
    auto [k, w] = carrier_quantities(m, c);
    o.table.footer.push_back({"k_tilde", k});
    o.table.footer.push_back({"w_tilde", w});
    return o;
  }
  ndr_solve(m, c);
  auto s = gas_speed(m);
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    o.table.rows.push_back({m.nodes[i].rho(), kind_text(m.nodes[i].kind), m.solved_u[i],
                            m.solved_v[i], s[i] + drift, free_speed_s0(m.nodes[i], c) + drift});
  o.table.footer.push_back({"k_tilde", m.carrier_k});
  o.table.footer.push_back({"w_tilde", m.carrier_w});
  o.table.footer.push_back({"eos_residual", equation_of_state_residual(m, c)});
  for (const auto& w : m.warnings) o.table.notes.push_back("warning: " + w);
  if (double_nodes) {
    GasModel fine = gas_model(cfg, c, split.v);
    fine.nodes_per_interval = 2 * m.nodes_per_interval - 1;
    ndr_solve(fine, c);
    // coarse node i of interval q sits at fine index 2i of the same interval
    double delta = 0.0;
    const int n = m.nodes_per_interval, nf = fine.nodes_per_interval;
    for (std::size_t q = 0; q < m.support.size(); ++q)
      for (int i = 0; i < n; ++i)
        delta = std::max(delta, std::abs(m.solved_u[q * n + i] - fine.solved_u[q * nf + 2 * i]));
    o.table.footer.push_back({"double_nodes_delta", delta});
  }
  return o;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solitons on a cnoidal KdV background", "cnoidal-kdv"};
  app.set_version_flag("--version", tool_version());
  std::string config_path, out_path, format = "csv", check = "pde", mode = "velocity";
  std::uint64_t seed = 0;
  int radius = 0;
  double tol = -1;
  bool double_nodes = false;
  app.require_subcommand(1, 1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration")->required();
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--radius", radius, "lattice truncation radius")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "tolerance override")->check(CLI::NonNegativeNumber);
  };
  auto* eval = app.add_subcommand("eval", "u, tau and det(1+G) on the grid");
  auto* verify = app.add_subcommand("verify", "numerical identity checks");
  auto* dyn = app.add_subcommand("dynamics", "velocities, shifts and tracked phases");
  auto* gas = app.add_subcommand("gas", "soliton gas dispersion relations");
  for (auto* s : {eval, verify, dyn, gas}) add_common(s);
  verify->add_option("--check", check, "pde|degeneration|fay|montecarlo")
      ->check(CLI::IsMember({"pde", "degeneration", "fay", "montecarlo"}));
  dyn->add_option("--mode", mode, "velocity|shifts|track")
      ->check(CLI::IsMember({"velocity", "shifts", "track"}));
  gas->add_flag("--double-nodes", double_nodes, "rerun with 2n-1 nodes and report the change");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read " + config_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    cfg = parse_config(j);
    auto given = [&](const char* flag) {
      std::size_t n = 0;
      for (auto* s : {eval, verify, dyn, gas}) n += s->count(flag);
      return n > 0;
    };
    if (given("--seed")) cfg.seed = seed;
    if (given("--radius")) cfg.radius = radius;
    if (tol >= 0) cfg.tol = tol;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }

  std::string command;
  Outcome o;
  try {
    if (eval->parsed()) {
      command = "eval";
      o = cmd_eval(cfg);
    } else if (verify->parsed()) {
      command = "verify " + check;
      o = cmd_verify(cfg, check);
    } else if (dyn->parsed()) {
      command = "dynamics " + mode;
      o = cmd_dynamics(cfg, mode);
    } else {
      command = "gas";
      o = cmd_gas(cfg, double_nodes);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << "\n";
    return 3;
  }

  json echo = resolved_json(cfg);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "config error: cannot write " << out_path << "\n";
      return 2;
    }
  }
  std::ostream& os = out_path.empty() ? out : file;
  if (format == "json")
    write_json(os, o.table, command, echo);
  else
    write_csv(os, o.table, command, echo);
  return o.passed ? 0 : 4;
}

}  // namespace cnoidal::cli
