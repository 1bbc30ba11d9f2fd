#pragma once

// Conservative update of cell averages: Simpson flux quadrature in time,
// well-balanced source term quadrature (with a shore-aware variant for
// half-wet cells), and the draining-time positivity fix.

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "active_flux/core.hpp"
#include "active_flux/reconstruction.hpp"

namespace afswe {

struct InterfaceFlux {
  double fh = 0.0;
  double fm = 0.0;
  double drain_scale = 1.0;  // accumulated draining reduction
};

inline InterfaceFlux simpson_flux(const ConservedPair& q_n,
                                  const ConservedPair& q_half,
                                  const ConservedPair& q_full, double g) {
  double fh0, fm0, fh1, fm1, fh2, fm2;
  physical_flux(q_n, g, fh0, fm0);
  physical_flux(q_half, g, fh1, fm1);
  physical_flux(q_full, g, fh2, fm2);
  return {(fh0 + 4.0 * fh1 + fh2) / 6.0, (fm0 + 4.0 * fm1 + fm2) / 6.0, 1.0};
}

// Time series of one interface's water height entering the quadrature.
struct HSeries {
  double n = 0.0, half = 0.0, full = 0.0;
};

inline double simpson_time(const HSeries& s) {
  return (s.n + 4.0 * s.half + s.full) / 6.0;
}

// The quadrature of (1/dx)(1/dt) \int dt \int dx  h * db/dx over an interval
// with bottom samples (bL, bC, bR) at its endpoints and midpoint, water
// height series at its endpoints and the reconstructed height at its center.
inline double bottom_coupling_quadrature(const HSeries& hL, const HSeries& hR,
                                         double h_center, double bL, double bC,
                                         double bR, double dx) {
  const double b1R = (-4.0 * bC - bL + 5.0 * bR) / (3.0 * dx);
  const double b1L = (4.0 * bC - 5.0 * bL + bR) / (3.0 * dx);
  const double b2R = (4.0 * bC - 11.0 * bL + 7.0 * bR) / (9.0 * dx);
  const double b2L = (-4.0 * bC - 7.0 * bL + 11.0 * bR) / (9.0 * dx);
  const double b0 = (bR - bL) / dx;
  return (hR.full / 12.0 + hR.half / 3.0) * b1R +
         (hL.full / 12.0 + hL.half / 3.0) * b1L - 0.25 * hR.n * b2R -
         0.25 * hL.n * b2L + (2.0 / 3.0) * h_center * b0;
}

// Momentum source rate -g <h db/dx> of a fully wet cell.
inline double source_quadrature(const HSeries& hL, const HSeries& hR,
                                double h_center_recon, double bL, double bC,
                                double bR, double dx, double g) {
  return -g * bottom_coupling_quadrature(hL, hR, h_center_recon, bL, bC, bR,
                                         dx);
}

namespace detail {
// Spatial Simpson of h_recon * db/dx over [a, b] at t^n, divided by dx.
// Exact for the piecewise reconstructions used here (cubic integrands).
inline double piece_simpson(const CellReconstruction& r, double a, double b,
                            double dx) {
  const double mid = 0.5 * (a + b);
  const double val = r.h_at(a) * r.bc.deriv(a) +
                     4.0 * r.h_at(mid) * r.bc.deriv(mid) +
                     r.h_at(b) * r.bc.deriv(b);
  return (b - a) / 6.0 * val / dx;
}
}  // namespace detail

// Momentum source rate of one cell, shore-aware. For half-wet cells the
// quadrature is applied over the wet subinterval (so that it cancels the
// flux difference exactly on a lake at rest) plus the exact contribution of
// the constant piece. hL/hR are the interface point series of the cell.
inline double source_quadrature_for_cell(const CellReconstruction& r,
                                         const HSeries& hL, const HSeries& hR,
                                         double g) {
  const BottomCell& bc = r.bc;
  const double dx = bc.dx;
  const double half = 0.5 * dx;

  switch (r.tag) {
    case ReconCase::Dry:
      return 0.0;
    case ReconCase::CaseB: {
      // Wet on [-dx/2, x*], constant hR to the right of the shore.
      const double Lw = r.xs + half;
      const double bshore = bc.eval(r.xs);
      const double bmid = bc.eval(r.quadrature_center());
      const double hc = r.h_at(r.quadrature_center());
      const double wet =
          bottom_coupling_quadrature(hL, hR, hc, bc.bL, bmid, bshore, Lw) *
          (Lw / dx);
      const double flat = simpson_time(hR) * (bc.bR - bshore) / dx;
      return -g * (wet + flat);
    }
    case ReconCase::CaseC: {
      // Constant hL to the left of the shore, wet on [x*, dx/2].
      const double Lw = half - r.xs;
      const double bshore = bc.eval(r.xs);
      const double bmid = bc.eval(r.quadrature_center());
      const double hc = r.h_at(r.quadrature_center());
      const double wet =
          bottom_coupling_quadrature(hL, hR, hc, bshore, bmid, bc.bR, Lw) *
          (Lw / dx);
      const double flat = simpson_time(hL) * (bshore - bc.bL) / dx;
      return -g * (wet + flat);
    }
    case ReconCase::CaseBExceptional:
    case ReconCase::CaseCExceptional: {
      // Rare, never on equilibria: exact spatial integral at t^n.
      return -g * (detail::piece_simpson(r, -half, r.xs, dx) +
                   detail::piece_simpson(r, r.xs, half, dx));
    }
    default:
      return source_quadrature(hL, hR, r.h_at(0.0), bc.bL, bc.bC, bc.bR, dx,
                               g);
  }
}

struct DrainingResult {
  int n_drained = 0;     // number of flux-scaling interventions
  bool capped = false;   // iteration cap hit (diagnostic)
};

// Scale the fluxes of any cell whose trial water average would drop below
// -1e-14 so that it exactly empties instead. Fixpoint over a worklist
// (ascending order, neighbors re-enqueued). For periodic domains `fluxes`
// has n entries (interface n is interface 0); otherwise n+1 entries.
inline DrainingResult draining_fixpoint(const std::vector<double>& avg_h,
                                        std::vector<InterfaceFlux>& fluxes,
                                        double dt, double dx, bool periodic) {
  const int n = (int)avg_h.size();
  auto idx = [&](int j) { return periodic ? ((j % n) + n) % n : j; };

  DrainingResult out;
  std::set<int> work;
  for (int i = 0; i < n; ++i) work.insert(i);

  const int cap = 10 * n;
  int iters = 0;
  while (!work.empty()) {
    const int i = *work.begin();
    work.erase(work.begin());
    InterfaceFlux& fL = fluxes[idx(i)];
    InterfaceFlux& fR = fluxes[idx(i + 1)];
    const double diff = fR.fh - fL.fh;
    const double trial = avg_h[i] - dt * diff / dx;
    if (trial < -1e-14) {
      const double scale = avg_h[i] * dx / (dt * diff);
      fL.fh *= scale;
      fL.fm *= scale;
      fL.drain_scale *= scale;
      fR.fh *= scale;
      fR.fm *= scale;
      fR.drain_scale *= scale;
      ++out.n_drained;
      if (periodic) {
        work.insert(((i - 1) % n + n) % n);
        work.insert((i + 1) % n);
      } else {
        if (i - 1 >= 0) work.insert(i - 1);
        if (i + 1 < n) work.insert(i + 1);
      }
    }
    if (++iters > cap && !work.empty()) {
      out.capped = true;
      break;
    }
  }
  return out;
}

struct AverageUpdateResult {
  std::vector<ConservedPair> avg;
  std::vector<int> emptied;  // cells drained to zero by the fluxes
};

// Conservative update (flux differences), snapping of machine-zero water,
// and addition of the momentum source in wet cells. `sources` are the
// per-cell rates from source_quadrature_for_cell.
inline AverageUpdateResult apply_average_update(
    const std::vector<ConservedPair>& avg,
    const std::vector<InterfaceFlux>& fluxes,
    const std::vector<double>& sources, double dt, double dx, bool periodic) {
  const int n = (int)avg.size();
  auto idx = [&](int j) { return periodic ? ((j % n) + n) % n : j; };

  AverageUpdateResult out;
  out.avg.resize(n);
  for (int i = 0; i < n; ++i) {
    const InterfaceFlux& fL = fluxes[idx(i)];
    const InterfaceFlux& fR = fluxes[idx(i + 1)];
    double h = avg[i].h - dt * (fR.fh - fL.fh) / dx;
    double m = avg[i].m - dt * (fR.fm - fL.fm) / dx;
    if (std::fabs(h) <= 1e-14) {
      if (avg[i].h > 0.0) out.emptied.push_back(i);
      out.avg[i] = {0.0, 0.0};
      continue;
    }
    if (h < 0.0)
      throw std::logic_error(
          "apply_average_update: negative average escaped draining");
    m += dt * sources[i];
    out.avg[i] = {h, m};
  }
  return out;
}

}  // namespace afswe
