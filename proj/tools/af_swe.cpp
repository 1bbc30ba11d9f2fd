// Command line driver: scenario runs, convergence tables, well-balance
// checks. See README for the CSV schemas.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "active_flux/csv.hpp"
#include "active_flux/scenarios.hpp"

namespace {

using afswe::ParamMap;

ParamMap load_config(const std::string& path) {
  ParamMap out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = val;
  }
  return out;
}

std::vector<double> parse_list_d(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<int> parse_list_i(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_list_d(s)) out.push_back((int)v);
  return out;
}

struct StepLogger {
  std::ofstream out;
  long long step = 0;

  explicit StepLogger(const std::string& path) {
    if (std::getenv("AF_SWE_SEED_DIAG") &&
        std::string(std::getenv("AF_SWE_SEED_DIAG")) == "1") {
      out.open(path);
      out << "step,t,dt,n_drained,n_frozen,n_guarded,max_froude,"
             "dry,direct,equilibrium,case_a,case_b,case_b_exc,case_c,"
             "case_c_exc\n";
    }
  }

  void log(double t, const afswe::StepReport& r) {
    ++step;
    if (!out.is_open()) return;
    out << step << ',' << afswe::fmt17(t) << ',' << afswe::fmt17(r.dt) << ','
        << r.n_drained << ',' << r.n_frozen << ',' << r.n_guarded << ','
        << afswe::fmt17(r.max_froude);
    for (int c : r.case_histogram) out << ',' << c;
    out << '\n';
  }
};

ParamMap cli_overrides(int cells, double cfl, double t_end) {
  ParamMap o;
  if (cells > 0) o["cells"] = std::to_string(cells);
  if (cfl > 0) o["cfl"] = afswe::fmt17(cfl);
  if (t_end >= 0) o["t_end"] = afswe::fmt17(t_end);
  return o;
}

int cmd_list() {
  for (const afswe::Scenario& s : afswe::builtin_scenarios()) {
    std::cout << s.name << "\n    " << s.description << "\n    defaults:";
    for (const auto& kv : s.defaults)
      std::cout << ' ' << kv.first << '=' << kv.second;
    std::cout << '\n';
  }
  return 0;
}

int cmd_run(const std::string& scenario, int cells, double cfl, double t_end,
            const std::string& config, const std::string& out_path,
            const std::string& snapshots) {
  const afswe::Scenario& sc = afswe::find_scenario(scenario);
  ParamMap overrides = load_config(config);
  for (const auto& kv : cli_overrides(cells, cfl, t_end))
    overrides[kv.first] = kv.second;

  afswe::Simulation sim = afswe::make_simulation(sc, overrides);
  const double tf = afswe::scenario_t_end(sc, overrides);

  std::vector<double> snaps = parse_list_d(snapshots);
  std::sort(snaps.begin(), snaps.end());

  StepLogger logger(out_path + ".steps.csv");
  auto advance_to = [&](double target) {
    while (sim.state().t < target) {
      const afswe::StepReport r = sim.step(target - sim.state().t);
      logger.log(sim.state().t, r);
      if (r.dt <= 0.0) break;
    }
  };

  std::string base = out_path;
  const auto dot = base.rfind(".csv");
  if (dot != std::string::npos && dot == base.size() - 4)
    base = base.substr(0, dot);
  for (double ts : snaps) {
    if (ts >= tf) continue;
    advance_to(ts);
    std::ostringstream name;
    name << base << "_t" << ts << ".csv";
    afswe::emit_snapshot(sim, name.str());
    std::cout << "snapshot t=" << ts << " -> " << name.str() << '\n';
  }
  advance_to(tf);
  afswe::emit_snapshot(sim, out_path);
  std::cout << "final t=" << sim.state().t << " -> " << out_path << '\n';
  return 0;
}

int cmd_convergence(const std::string& scenario, const std::string& grids,
                    double t_end, double cfl, const std::string& config,
                    const std::string& out_path) {
  const std::vector<int> ns = parse_list_i(grids);
  if (ns.size() < 2)
    throw std::invalid_argument("--grids needs at least two entries "
                                "(last one is the reference)");
  const afswe::Scenario& sc = afswe::find_scenario(scenario);
  ParamMap base = load_config(config);
  for (const auto& kv : cli_overrides(0, cfl, t_end))
    base[kv.first] = kv.second;

  const int n_ref = ns.back();
  ParamMap pref = base;
  pref["cells"] = std::to_string(n_ref);
  afswe::Simulation ref = afswe::make_simulation(sc, pref);
  const double tf = afswe::scenario_t_end(sc, pref);
  ref.run_until(tf);

  std::ostringstream table;
  table << "grid,err_h,order_h,err_m,order_m\n";
  std::cout << "grid      err_h        order_h   err_m        order_m\n";
  double prev_h = 0, prev_m = 0;
  bool have_prev = false;
  for (size_t k = 0; k + 1 < ns.size(); ++k) {
    const int n = ns[k];
    if (n_ref % n != 0)
      throw std::invalid_argument("reference grid must be a multiple of " +
                                  std::to_string(n));
    ParamMap p = base;
    p["cells"] = std::to_string(n);
    afswe::Simulation sim = afswe::make_simulation(sc, p);
    sim.run_until(tf);

    const int stride = n_ref / n;
    std::vector<afswe::ConservedPair> rpts(n + 1);
    for (int j = 0; j <= n; ++j) rpts[j] = ref.state().pts[j * stride];
    const afswe::L1Error e = afswe::l1_error(sim.state(), rpts, sim.grid());

    const double oh = have_prev ? afswe::convergence_order(prev_h, e.h) : 0.0;
    const double om = have_prev ? afswe::convergence_order(prev_m, e.m) : 0.0;
    table << n << ',' << afswe::fmt17(e.h) << ','
          << (have_prev ? afswe::fmt17(oh) : "") << ',' << afswe::fmt17(e.m)
          << ',' << (have_prev ? afswe::fmt17(om) : "") << '\n';
    char line[160];
    std::snprintf(line, sizeof(line), "%-9d %-12.5e %-9.2f %-12.5e %-9.2f\n",
                  n, e.h, oh, e.m, om);
    std::cout << line;
    prev_h = e.h;
    prev_m = e.m;
    have_prev = true;
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << table.str();
  }
  return 0;
}

int cmd_wb_check(const std::string& scenario, long long steps,
                 const std::string& config) {
  const afswe::Scenario& sc = afswe::find_scenario(scenario);
  const ParamMap overrides = load_config(config);
  const ParamMap p = afswe::merged_params(sc, overrides);
  if (!sc.level_based || p.find("level") == p.end())
    throw std::invalid_argument(
        "wb-check needs a level-based scenario with a 'level' parameter");
  const double W = afswe::param_d(p, "level");

  afswe::Simulation sim = afswe::make_simulation(sc, overrides);
  double max_dlevel = 0.0, max_m = 0.0;
  for (long long s = 0; s < steps; ++s) sim.step();
  const afswe::Grid& grid = sim.grid();
  for (int j = 0; j <= grid.n_cells; ++j) {
    const afswe::ConservedPair& q = sim.state().pts[j];
    if (q.h <= 0.0) continue;
    const double lvl = q.h + sim.bottom().interface_sample(j);
    max_dlevel = std::max(max_dlevel, std::fabs(lvl - W));
    max_m = std::max(max_m, std::fabs(q.m));
  }
  std::cout << "steps=" << steps << " t=" << sim.state().t
            << " max|h+b-W|=" << afswe::fmt17(max_dlevel)
            << " max|m|=" << afswe::fmt17(max_m) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active Flux shallow water solver"};
  app.require_subcommand(1);

  app.add_subcommand("list", "print the scenario catalog");

  auto* run = app.add_subcommand("run", "run a scenario and emit snapshots");
  std::string scenario, config, out_path, snapshots;
  int cells = 0;
  double cfl = -1, t_end = -1;
  run->add_option("--scenario", scenario, "scenario name")->required();
  run->add_option("--cells", cells, "override cell count");
  run->add_option("--cfl", cfl, "override CFL number");
  run->add_option("--t-end", t_end, "override final time");
  run->add_option("--config", config, "key=value config file");
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--snapshots", snapshots, "comma-separated snapshot times");

  auto* conv =
      app.add_subcommand("convergence", "self-convergence error table");
  std::string c_scenario, c_grids, c_config, c_out;
  double c_t_end = -1, c_cfl = -1;
  conv->add_option("--scenario", c_scenario, "scenario name")->required();
  conv->add_option("--grids", c_grids,
                   "comma-separated grids, last is the reference")
      ->required();
  conv->add_option("--t-end", c_t_end, "override final time");
  conv->add_option("--cfl", c_cfl, "override CFL number");
  conv->add_option("--config", c_config, "key=value config file");
  conv->add_option("--out", c_out, "output CSV path");

  auto* wb = app.add_subcommand("wb-check", "lake-at-rest deviation report");
  std::string w_scenario = "four-lakes", w_config;
  long long w_steps = 10000;
  wb->add_option("--scenario", w_scenario, "scenario name");
  wb->add_option("--steps", w_steps, "number of steps");
  wb->add_option("--config", w_config, "key=value config file");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("run"))
      return cmd_run(scenario, cells, cfl, t_end, config, out_path,
                     snapshots);
    if (app.got_subcommand("convergence"))
      return cmd_convergence(c_scenario, c_grids, c_t_end, c_cfl, c_config,
                             c_out);
    if (app.got_subcommand("wb-check"))
      return cmd_wb_check(w_scenario, w_steps, w_config);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
