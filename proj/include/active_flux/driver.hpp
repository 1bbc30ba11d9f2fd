#pragma once

// Time-step orchestration: CFL control, ghost handling for the three
// boundary kinds, initialization with shore search, and error norms.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "active_flux/average_update.hpp"
#include "active_flux/core.hpp"
#include "active_flux/point_evolution.hpp"
#include "active_flux/reconstruction.hpp"

namespace afswe {

struct StepReport {
  double dt = 0.0;
  int n_drained = 0;
  int n_frozen = 0;
  int n_guarded = 0;
  bool drain_capped = false;
  bool all_dry_dt_fallback = false;
  std::array<int, 8> case_histogram{};  // indexed by ReconCase
  double max_froude = 0.0;
};

class Simulation {
 public:
  static constexpr int G = BottomTopography::kGhost;

  Simulation(const Grid& grid, BottomTopography bottom,
             const Constants& cst = Constants{})
      : grid_(grid), bottom_(std::move(bottom)), cst_(cst) {}

  // Point values from the pointwise data (clamped), averages by Simpson's
  // rule, or over the wet subinterval only in cells containing a shore
  // (located by bisection on h0 > 0).
  void initialize(const std::function<double(double)>& h0,
                  const std::function<double(double)>& m0) {
    const int n = grid_.n_cells;
    state_.avg.resize(n);
    state_.pts.resize(n + 1);
    state_.t = 0.0;

    init_pts_ext_.assign(n + 2 * G + 1, ConservedPair{});
    init_avg_ext_.assign(n + 2 * G, ConservedPair{});
    for (int j = -G; j <= n + G; ++j)
      init_pts_ext_[j + G] = sample_point(h0, m0, grid_.interface_x(j));
    for (int i = -G; i < n + G; ++i)
      init_avg_ext_[i + G] = init_cell_average(h0, m0, i);

    for (int j = 0; j <= n; ++j) state_.pts[j] = init_pts_ext_[j + G];
    if (grid_.boundary == Boundary::Periodic) state_.pts[n] = state_.pts[0];
    for (int i = 0; i < n; ++i) state_.avg[i] = init_avg_ext_[i + G];

    state_.frozen = state_.pts;
    state_.is_frozen.assign(n + 1, 0);
    boundary_h_outflux_ = 0.0;
  }

  double compute_dt(bool* all_dry = nullptr) const {
    double smax = 0.0;
    for (const ConservedPair& q : state_.pts) {
      if (q.h < cst_.dry_avg_tol) continue;
      const double c = std::sqrt(cst_.g * q.h);
      smax = std::max(smax, std::fabs(q.m / q.h) + c);
    }
    if (all_dry) *all_dry = (smax == 0.0);
    if (smax == 0.0) return cst_.cfl * grid_.dx() / std::sqrt(cst_.g);
    return cst_.cfl * grid_.dx() / smax;
  }

  // Reconstruction snapshot of the current state including ghost cells.
  ReconField build_recon_field() const {
    const int n = grid_.n_cells;
    ReconField f;
    f.bt = &bottom_;
    f.pts.resize(n + 2 * G + 1);
    for (int j = -G; j <= n + G; ++j) f.pts[j + G] = ghost_point(j);
    f.cells.resize(n + 2 * G);
    for (int i = -G; i < n + G; ++i) {
      const ConservedPair a = ghost_avg(i);
      const ConservedPair& pL = f.pts[i + G];
      const ConservedPair& pR = f.pts[i + 1 + G];
      f.cells[i + G] = build_cell_reconstruction(
          a.h, pL.h, pR.h, a.m, pL.m, pR.m, BottomCell::from(bottom_, i),
          cst_);
    }
    return f;
  }

  StepReport step(double dt_cap = std::numeric_limits<double>::infinity()) {
    const int n = grid_.n_cells;
    const double dx = grid_.dx();
    const bool periodic = (grid_.boundary == Boundary::Periodic);

    StepReport rep;
    rep.dt = std::min(compute_dt(&rep.all_dry_dt_fallback), dt_cap);
    const double dt = rep.dt;

    const ReconField recon = build_recon_field();
    for (int i = 0; i < n; ++i)
      ++rep.case_histogram[(int)recon.cell(i).tag];
    for (const ConservedPair& q : state_.pts)
      if (q.h > 0.0)
        rep.max_froude =
            std::max(rep.max_froude, std::fabs(q.m / q.h) /
                                         std::sqrt(cst_.g * q.h));

    PointUpdateResult pu =
        update_all_points(recon, bottom_, dt, cst_, well_balance_);
    rep.n_frozen = pu.n_frozen;
    rep.n_guarded = pu.n_guarded;

    // Simpson fluxes; for periodic domains interface n is interface 0.
    const int nfl = periodic ? n : n + 1;
    std::vector<InterfaceFlux> fluxes(nfl);
    for (int j = 0; j < nfl; ++j)
      fluxes[j] =
          simpson_flux(state_.pts[j], pu.pts_half[j], pu.pts_full[j], cst_.g);

    std::vector<double> avg_h(n);
    for (int i = 0; i < n; ++i) avg_h[i] = state_.avg[i].h;
    const DrainingResult dr =
        draining_fixpoint(avg_h, fluxes, dt, dx, periodic);
    rep.n_drained = dr.n_drained;
    rep.drain_capped = dr.capped;

    std::vector<double> sources(n);
    for (int i = 0; i < n; ++i) {
      const int jR = periodic ? (i + 1) % n : i + 1;
      const HSeries hL{state_.pts[i].h, pu.pts_half[i].h, pu.pts_full[i].h};
      const HSeries hR{state_.pts[jR].h, pu.pts_half[jR].h,
                       pu.pts_full[jR].h};
      sources[i] = source_quadrature_for_cell(recon.cell(i), hL, hR, cst_.g);
    }

    AverageUpdateResult au =
        apply_average_update(state_.avg, fluxes, sources, dt, dx, periodic);
    state_.avg = std::move(au.avg);
    state_.pts = std::move(pu.pts_full);

    // Cells drained empty lose their adjacent point values, so that the next
    // reconstruction stays continuous and non-negative. Dirichlet boundary
    // points are held at their prescribed values even then.
    const bool dirichlet = grid_.boundary == Boundary::DirichletFrozen;
    for (int i : au.emptied) {
      if (!(dirichlet && i == 0)) state_.pts[i] = {0.0, 0.0};
      if (!(dirichlet && i + 1 == n)) state_.pts[i + 1] = {0.0, 0.0};
      if (periodic) {
        if (i == 0) state_.pts[n] = {0.0, 0.0};
        if (i + 1 == n) state_.pts[0] = {0.0, 0.0};
      }
    }
    if (periodic) state_.pts[n] = state_.pts[0];

    state_.frozen = state_.pts;
    state_.is_frozen.assign(pu.frozen.begin(), pu.frozen.end());
    if (!periodic)
      boundary_h_outflux_ +=
          dt * (fluxes[n].fh - fluxes[0].fh);

    state_.t += dt;
    return rep;
  }

  // Advance to t_end; the last step is clipped to land on it exactly.
  std::vector<StepReport> run_until(double t_end,
                                    long long max_steps = 1'000'000'000LL) {
    std::vector<StepReport> reports;
    while (state_.t < t_end && (long long)reports.size() < max_steps) {
      const double remaining = t_end - state_.t;
      reports.push_back(step(remaining));
      if (reports.back().dt <= 0.0) break;
    }
    return reports;
  }

  const SolutionState& state() const { return state_; }
  SolutionState& state() { return state_; }
  const Grid& grid() const { return grid_; }
  const BottomTopography& bottom() const { return bottom_; }
  const Constants& constants() const { return cst_; }
  void set_well_balance(bool on) { well_balance_ = on; }

  // Net water volume that has left through the boundaries (non-periodic).
  double boundary_h_outflux() const { return boundary_h_outflux_; }

  double total_water() const {
    double s = 0.0;
    for (const ConservedPair& q : state_.avg) s += q.h;
    return s * grid_.dx();
  }

  ConservedPair ghost_point(int j) const {
    const int n = grid_.n_cells;
    if (j >= 0 && j <= n) return state_.pts[j];
    switch (grid_.boundary) {
      case Boundary::Periodic:
        return state_.pts[((j % n) + n) % n];
      case Boundary::DirichletFrozen:
        return dirichlet_ghost(j < 0);
      case Boundary::OutflowExtrapolate:
        return state_.pts[j < 0 ? 0 : n];
    }
    return {};
  }

  ConservedPair ghost_avg(int i) const {
    const int n = grid_.n_cells;
    if (i >= 0 && i < n) return state_.avg[i];
    switch (grid_.boundary) {
      case Boundary::Periodic:
        return state_.avg[((i % n) + n) % n];
      case Boundary::DirichletFrozen:
        return dirichlet_ghost(i < 0);
      case Boundary::OutflowExtrapolate:
        return state_.avg[i < 0 ? 0 : n - 1];
    }
    return {};
  }

 private:
  ConservedPair sample_point(const std::function<double(double)>& h0,
                             const std::function<double(double)>& m0,
                             double x) const {
    const double h = h0(x);
    if (!(h > 0.0)) return {0.0, 0.0};
    return {h, m0(x)};
  }

  ConservedPair init_cell_average(const std::function<double(double)>& h0,
                                  const std::function<double(double)>& m0,
                                  int i) const {
    const double xL = grid_.interface_x(i);
    const double xR = grid_.interface_x(i + 1);
    const double xc = grid_.center_x(i);
    const bool wetL = h0(xL) > 0.0;
    const bool wetC = h0(xc) > 0.0;
    const bool wetR = h0(xR) > 0.0;

    auto q = [&](double x) { return sample_point(h0, m0, x); };

    if (wetL == wetR) {
      if (wetC != wetL)
        throw std::invalid_argument(
            "initialize: cell " + std::to_string(i) +
            " has two dry/wet interfaces; refine the grid");
      if (!wetL) return {0.0, 0.0};
      const ConservedPair a = q(xL), b = q(xc), c = q(xR);
      return {(a.h + 4.0 * b.h + c.h) / 6.0, (a.m + 4.0 * b.m + c.m) / 6.0};
    }

    // One shore inside the cell: bisect on the wet predicate.
    double lo = xL, hi = xR;  // h0(lo side) wet iff wetL
    for (int it = 0; it < 200 && hi - lo > 1e-14 * grid_.dx(); ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((h0(mid) > 0.0) == wetL)
        lo = mid;
      else
        hi = mid;
    }
    const double xs = 0.5 * (lo + hi);

    if (wetL) {
      const ConservedPair a = q(xL), b = q(0.5 * (xL + xs)), c = q(xs);
      const double w = (xs - xL) / grid_.dx();
      return {(a.h + 4.0 * b.h + c.h) / 6.0 * w,
              (a.m + 4.0 * b.m + c.m) / 6.0 * w};
    }
    const ConservedPair a = q(xs), b = q(0.5 * (xs + xR)), c = q(xR);
    const double w = (xR - xs) / grid_.dx();
    return {(a.h + 4.0 * b.h + c.h) / 6.0 * w,
            (a.m + 4.0 * b.m + c.m) / 6.0 * w};
  }

  // Characteristic realization of the Dirichlet data. A wet subcritical
  // boundary admits exactly one prescribed quantity. At the (left) inflow
  // the ghost carries the prescribed discharge with the depth taken from the
  // boundary point. At the (right) outflow the incoming invariant Q- = 2c - v
  // is held at its initial value while the outgoing Q+ = 2c + v is
  // extrapolated, so outgoing waves leave without reflection and the initial
  // data remain an exact fixed point.
  ConservedPair dirichlet_ghost(bool left) const {
    const int n = grid_.n_cells;
    const ConservedPair cur = state_.pts[left ? 0 : n];
    const ConservedPair ini = init_pts_ext_[(left ? 0 : n) + G];
    if (left) return {cur.h, ini.m};
    return from_char(to_char(cur, cst_.g).Qp, to_char(ini, cst_.g).Qm, cst_.g);
  }

  Grid grid_;
  BottomTopography bottom_;
  Constants cst_;
  SolutionState state_;
  std::vector<ConservedPair> init_pts_ext_, init_avg_ext_;
  double boundary_h_outflux_ = 0.0;
  bool well_balance_ = true;
};

// L1 norm of point-value differences: err = dx * sum |q - ref|.
struct L1Error {
  double h = 0.0;
  double m = 0.0;
};

inline L1Error l1_error(const SolutionState& state,
                        const std::vector<ConservedPair>& reference,
                        const Grid& grid) {
  const int n = grid.n_cells;
  const int j_hi = (grid.boundary == Boundary::Periodic) ? n - 1 : n;
  if ((int)reference.size() < j_hi + 1)
    throw std::invalid_argument("l1_error: reference size mismatch");
  L1Error e;
  for (int j = 0; j <= j_hi; ++j) {
    e.h += std::fabs(state.pts[j].h - reference[j].h);
    e.m += std::fabs(state.pts[j].m - reference[j].m);
  }
  e.h *= grid.dx();
  e.m *= grid.dx();
  return e;
}

inline double convergence_order(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

}  // namespace afswe
