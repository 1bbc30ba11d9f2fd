#pragma once

// Built-in scenario registry: each entry carries a flat key=value parameter
// set (overridable from config files / CLI flags) and builds a ready-to-run
// Simulation.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "active_flux/driver.hpp"

namespace afswe {

using ParamMap = std::map<std::string, std::string>;

inline double param_d(const ParamMap& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("missing parameter " + key);
  return std::stod(it->second);
}

inline int param_i(const ParamMap& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("missing parameter " + key);
  return std::stoi(it->second);
}

struct Scenario {
  std::string name;
  std::string description;
  ParamMap defaults;
  // Analytic bottom and initial data from the merged parameters. Initial
  // data may be specified as a water level (then h = max(0, level - b) with
  // the projected bottom) or directly as a height.
  std::function<double(double, const ParamMap&)> bottom;
  bool level_based = false;
  std::function<double(double, const ParamMap&)> level_or_h;
  std::function<double(double, const ParamMap&)> m0;
  Boundary boundary = Boundary::Periodic;
};

inline ParamMap merged_params(const Scenario& sc, const ParamMap& overrides) {
  ParamMap p = sc.defaults;
  for (const auto& kv : overrides) p[kv.first] = kv.second;
  return p;
}

inline Simulation make_simulation(const Scenario& sc,
                                  const ParamMap& overrides = {}) {
  const ParamMap p = merged_params(sc, overrides);
  Grid grid;
  grid.x_min = param_d(p, "x_min");
  grid.x_max = param_d(p, "x_max");
  grid.n_cells = param_i(p, "cells");
  grid.boundary = sc.boundary;
  Constants cst;
  cst.g = param_d(p, "g");
  cst.cfl = param_d(p, "cfl");
  if (auto it = p.find("limiter"); it != p.end())
    cst.plain_parabolic = (it->second == "off");

  auto bfun = [&sc, p](double x) { return sc.bottom(x, p); };
  BottomTopography bt = BottomTopography::project(bfun, grid);

  Simulation sim(grid, std::move(bt), cst);
  const BottomTopography& btr = sim.bottom();
  std::function<double(double)> h0;
  if (sc.level_based) {
    // Level-based data use the projected bottom so that discrete equilibria
    // are met exactly.
    h0 = [&sc, p, &btr](double x) {
      return sc.level_or_h(x, p) - btr.eval_global(x);
    };
  } else {
    h0 = [&sc, p](double x) { return sc.level_or_h(x, p); };
  }
  auto m0 = [&sc, p](double x) { return sc.m0(x, p); };
  sim.initialize(h0, m0);
  return sim;
}

inline double scenario_t_end(const Scenario& sc,
                             const ParamMap& overrides = {}) {
  return param_d(merged_params(sc, overrides), "t_end");
}

inline const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> reg = [] {
    std::vector<Scenario> v;
    const double pi = 3.14159265358979323846;

    {
      Scenario s;
      s.name = "four-lakes";
      s.description =
          "lake at rest over a cosine bottom forming four lakes; "
          "stationarity to machine precision";
      s.defaults = {{"x_min", "0"},   {"x_max", "1"},  {"cells", "100"},
                    {"cfl", "0.35"},  {"g", "9.812"},  {"t_end", "10"},
                    {"level", "0.33"}};
      s.bottom = [pi](double x, const ParamMap&) {
        return 0.2 * (1.0 + std::cos(8.0 * pi * x));
      };
      s.level_based = true;
      s.level_or_h = [](double, const ParamMap& p) {
        return param_d(p, "level");
      };
      s.m0 = [](double, const ParamMap&) { return 0.0; };
      s.boundary = Boundary::Periodic;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "convergence";
      s.description =
          "smooth Gaussian level bump over a cosine bottom; third-order "
          "convergence study";
      // The smooth accuracy study runs with the plain parabolic
      // reconstruction (no limiting, no positivity modification);
      // well-balancing stays active.
      s.defaults = {{"x_min", "0"},  {"x_max", "1"},    {"cells", "64"},
                    {"cfl", "0.7"},  {"g", "9.812"},    {"t_end", "0.03"},
                    {"limiter", "off"}};
      s.bottom = [pi](double x, const ParamMap&) {
        return 0.2 * (1.0 + std::cos(6.0 * pi * x));
      };
      s.level_based = true;
      s.level_or_h = [](double x, const ParamMap&) {
        const double r = (x - 0.5) / 0.05;
        return 0.5 + 0.3 * std::exp(-r * r);
      };
      s.m0 = [](double, const ParamMap&) { return 0.0; };
      s.boundary = Boundary::Periodic;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "bouchut-accuracy";
      s.description =
          "moving water over a parabolic bump with kinks; reduced-regularity "
          "accuracy test";
      s.defaults = {{"x_min", "0"}, {"x_max", "25"}, {"cells", "256"},
                    {"cfl", "0.7"}, {"g", "9.812"},  {"t_end", "1"}};
      s.bottom = [](double x, const ParamMap&) {
        const double r = (x - 20.0) / 4.0;
        return std::max(0.0, 0.48 * (1.0 - r * r));
      };
      s.level_based = false;
      s.level_or_h = [](double, const ParamMap&) { return 4.0; };
      s.m0 = [](double, const ParamMap&) { return 10.0; };
      s.boundary = Boundary::Periodic;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "cls04-step";
      s.description =
          "dam break over a regularized bottom step of height B "
          "(B in {2,4,50})";
      s.defaults = {{"x_min", "0"},    {"x_max", "1"},  {"cells", "1000"},
                    {"cfl", "0.7"},    {"g", "9.812"},  {"t_end", "0.048"},
                    {"B", "2"},        {"eps", "0.01"}};
      s.bottom = [](double x, const ParamMap& p) {
        const double B = param_d(p, "B");
        const double eps = param_d(p, "eps");
        if (x < 0.5) return B;
        if (x < 0.5 + 0.5 * eps) return B * (1.0 - (x - 0.5) / (0.5 * eps));
        return 0.0;
      };
      s.level_based = false;
      s.level_or_h = [](double x, const ParamMap&) {
        return x < 0.5 ? 3.0 : 4.0;
      };
      s.m0 = [](double, const ParamMap&) { return 0.0; };
      s.boundary = Boundary::OutflowExtrapolate;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "parabolic-bowl";
      s.description =
          "sloshing water in a parabolic bowl; periodic-in-time exact "
          "solution with moving shores";
      s.defaults = {{"x_min", "-5000"}, {"x_max", "5000"}, {"cells", "200"},
                    {"cfl", "0.7"},     {"g", "9.812"},    {"t_end", "5000"},
                    {"v_max", "5"},     {"H0", "10"}};
      s.bottom = [](double x, const ParamMap&) {
        const double x0 = 300.0 * std::sqrt(10.0);
        return (x / x0) * (x / x0);
      };
      s.level_based = true;
      s.level_or_h = [](double x, const ParamMap& p) {
        const double g = param_d(p, "g");
        const double v_max = param_d(p, "v_max");
        const double H0 = param_d(p, "H0");
        const double x0 = 300.0 * std::sqrt(10.0);
        return H0 - v_max * v_max / (2.0 * g) -
               std::sqrt(2.0 / g) * (v_max / x0) * x;
      };
      s.m0 = [](double, const ParamMap&) { return 0.0; };
      s.boundary = Boundary::OutflowExtrapolate;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "double-rarefaction";
      s.description =
          "colliding/with-drying double rarefaction over a regularized "
          "bottom block; enlarged domain";
      s.defaults = {{"x_min", "-25"}, {"x_max", "50"}, {"cells", "600"},
                    {"cfl", "0.7"},   {"g", "9.812"},  {"t_end", "0.25"},
                    {"eps", "0.01"}};
      s.bottom = [](double x, const ParamMap& p) {
        const double eps = param_d(p, "eps");
        const double a = 25.0 / 3.0, b = 25.0 / 2.0;
        if (x < a - 0.5 * eps || x > b + 0.5 * eps) return 0.0;
        if (x < a) return (x - (a - 0.5 * eps)) / (0.5 * eps);
        if (x <= b) return 1.0;
        return 1.0 - (x - b) / (0.5 * eps);
      };
      s.level_based = true;
      s.level_or_h = [](double, const ParamMap&) { return 10.0; };
      s.m0 = [](double x, const ParamMap&) {
        return x < 50.0 / 3.0 ? -350.0 : 350.0;
      };
      s.boundary = Boundary::OutflowExtrapolate;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "xs11-double-rarefaction";
      s.description =
          "double rarefaction into vacuum on a flat bottom; left/right "
          "states configurable";
      s.defaults = {{"x_min", "0"},     {"x_max", "600"}, {"cells", "250"},
                    {"cfl", "0.7"},     {"g", "9.812"},   {"t_end", "4"},
                    {"h_left", "10"},   {"m_left", "-350"},
                    {"h_right", "10"},  {"m_right", "350"},
                    {"x_jump", "300"}};
      s.bottom = [](double, const ParamMap&) { return 0.0; };
      s.level_based = false;
      s.level_or_h = [](double x, const ParamMap& p) {
        return x < param_d(p, "x_jump") ? param_d(p, "h_left")
                                        : param_d(p, "h_right");
      };
      s.m0 = [](double x, const ParamMap& p) {
        return x < param_d(p, "x_jump") ? param_d(p, "m_left")
                                        : param_d(p, "m_right");
      };
      s.boundary = Boundary::OutflowExtrapolate;
      v.push_back(s);
    }
    {
      Scenario s;
      s.name = "transcritical";
      s.description =
          "flow over a bump stationarizing on a transcritical shock "
          "(hydraulic jump)";
      s.defaults = {{"x_min", "0"}, {"x_max", "25"}, {"cells", "200"},
                    {"cfl", "0.7"}, {"g", "9.812"},  {"t_end", "50"}};
      s.bottom = [](double x, const ParamMap&) {
        return std::max(0.0, 0.2 - 0.05 * (x - 10.0) * (x - 10.0));
      };
      s.level_based = false;
      s.level_or_h = [](double, const ParamMap&) { return 0.33; };
      s.m0 = [](double, const ParamMap&) { return 0.18; };
      s.boundary = Boundary::DirichletFrozen;
      v.push_back(s);
    }
    return v;
  }();
  return reg;
}

inline const Scenario& find_scenario(const std::string& name) {
  for (const Scenario& s : builtin_scenarios())
    if (s.name == name) return s;
  std::string msg = "unknown scenario '" + name + "'; available:";
  for (const Scenario& s : builtin_scenarios()) msg += " " + s.name;
  throw std::invalid_argument(msg);
}

// Parabolic-bowl exact solution helpers.
inline double bowl_omega(double g) {
  const double x0 = 300.0 * std::sqrt(10.0);
  return std::sqrt(2.0 * g) / x0;
}

// Exact shore positions at time t (left and right).
inline void bowl_shores(double t, double g, double v_max, double H0,
                        double& x_left, double& x_right) {
  const double x0 = 300.0 * std::sqrt(10.0);
  const double om = bowl_omega(g);
  const double a = std::sqrt(2.0 / g) * v_max * std::cos(om * t);
  x_left = 0.5 * x0 * (-2.0 * std::sqrt(H0) - a);
  x_right = 0.5 * x0 * (2.0 * std::sqrt(H0) - a);
}

}  // namespace afswe
