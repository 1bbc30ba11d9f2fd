#pragma once

// Globally continuous per-cell reconstruction of (h, m): parabolic,
// power-law-limited, equilibrium-variable, and the piecewise non-negative
// shore reconstructions for half-wet cells.

#include <cmath>
#include <optional>

#include "active_flux/core.hpp"

namespace afswe {

// Parabola on [xL, xR] with endpoint values qL, qR and mean qbar.
// Written so that equal inputs reproduce the constant exactly in floating
// point (the curvature combination vanishes bit-exactly).
inline double recon_parabolic(double qbar, double qL, double qR, double xL,
                              double xR, double x) {
  if (x == xL) return qL;
  if (x == xR) return qR;
  const double L = xR - xL;
  const double s = x - 0.5 * (xL + xR);
  const double d = (qbar - qL) + (qbar - qR);  // 2*qbar - qL - qR
  return qbar + 0.25 * d + s * ((qR - qL) / L) + s * s * (-3.0 * d / (L * L));
}

// Membership in the limiter set: four strict-inequality clauses.
inline bool in_limiter_set(double qbar, double qL, double qR) {
  const double third = (qR - qL) / 3.0;
  if (qL < qbar && qbar < qL + third) return true;
  if (qR - third < qbar && qbar < qR) return true;
  if (qR < qbar && qbar < qR - third) return true;
  if (qL + third < qbar && qbar < qL) return true;
  return false;
}

// Power-law reconstruction qL + (qR-qL)*|(x-xL)/(xR-xL)|^E with
// E = (qR-qbar)/(qbar-qL); parabolic fallback outside [1/e_max, e_max].
inline double recon_limited(double qbar, double qL, double qR, double xL,
                            double xR, double x, double e_max = 50.0) {
  if (qbar == qL) return recon_parabolic(qbar, qL, qR, xL, xR, x);
  const double E = (qR - qbar) / (qbar - qL);
  if (!(E >= 1.0 / e_max && E <= e_max))
    return recon_parabolic(qbar, qL, qR, xL, xR, x);
  if (x == xL) return qL;
  if (x == xR) return qR;
  const double xi = std::fabs((x - xL) / (xR - xL));
  return qL + (qR - qL) * std::pow(xi, E);
}

inline double recon_dispatch(double qbar, double qL, double qR, double xL,
                             double xR, double x, double e_max = 50.0) {
  if (in_limiter_set(qbar, qL, qR))
    return recon_limited(qbar, qL, qR, xL, xR, x, e_max);
  return recon_parabolic(qbar, qL, qR, xL, xR, x);
}

// A parabolic reconstruction with positive endpoint values and average dips
// below zero somewhere inside the cell iff both conditions hold.
inline bool parabola_goes_negative(double hbar, double hL, double hR) {
  return 3.0 * hbar < hL + hR - std::sqrt(hL * hR) &&
         hbar < 0.5 * (hL + hR) - std::fabs(hR - hL) / 6.0;
}

// Per-cell bottom data in local coordinates.
struct BottomCell {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;  // b(x) = b0 + b1 x + b2 x^2
  double bL = 0.0, bC = 0.0, bR = 0.0;  // stored samples
  double dx = 1.0;

  static BottomCell from(const BottomTopography& bt, int i) {
    BottomCell c;
    c.b0 = bt.b0(i);
    c.b1 = bt.b1(i);
    c.b2 = bt.b2(i);
    c.bL = bt.interface_sample(i);
    c.bC = bt.center_sample(i);
    c.bR = bt.interface_sample(i + 1);
    c.dx = bt.dx();
    return c;
  }

  double eval(double x) const {
    const double half = 0.5 * dx;
    if (x == -half) return bL;
    if (x == half) return bR;
    return b0 + x * (b1 + x * b2);
  }
  double deriv(double x) const { return b1 + 2.0 * x * b2; }
};

// Shore equation for the piecewise reconstructions: with the constant-side
// value h_near and the opposite endpoint h_far, the wet fraction xi of the
// cell solves
//   G(xi) = -(hbar - h_near) + (h_far - h_near) xi/2 + b2 dx^2 xi^3 / 6 = 0.
// Returns the usable root in (0, 1), or nothing in the exceptional regime
// (b2 < 0, hbar above the critical average) or when no root lies in (0, 1).
inline std::optional<double> solve_shore_cubic(double hbar, double h_near,
                                               double h_far, double b2,
                                               double dx) {
  const double d = h_far - h_near;
  const double A = b2 * dx * dx / 6.0;
  const double rhs = hbar - h_near;
  auto G = [&](double xi) { return -rhs + 0.5 * d * xi + A * xi * xi * xi; };

  if (d <= 0.0) return std::nullopt;
  if (rhs <= 0.0) return 1e-12;  // shore degenerates onto the interface

  double hi;  // upper end of the monotone bracket
  if (b2 < 0.0) {
    const double xi0 = std::sqrt(d / (-b2 * dx * dx));
    hi = std::min(xi0, 1.0);
  } else {
    hi = 1.0;
  }
  if (!(G(hi) >= 0.0)) return std::nullopt;  // no root before G turns over

  double lo = 0.0;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (G(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double xi = 0.5 * (lo + hi);
  if (xi < 1e-12) xi = 1e-12;
  if (!(xi < 1.0)) return std::nullopt;
  return xi;
}

enum class ReconCase {
  Dry,
  DirectH,
  EquilibriumHB,
  CaseA,
  CaseB,
  CaseBExceptional,
  CaseC,
  CaseCExceptional
};

inline const char* recon_case_name(ReconCase c) {
  switch (c) {
    case ReconCase::Dry: return "dry";
    case ReconCase::DirectH: return "direct";
    case ReconCase::EquilibriumHB: return "equilibrium";
    case ReconCase::CaseA: return "case_a";
    case ReconCase::CaseB: return "case_b";
    case ReconCase::CaseBExceptional: return "case_b_exc";
    case ReconCase::CaseC: return "case_c";
    case ReconCase::CaseCExceptional: return "case_c_exc";
  }
  return "?";
}

// Tagged evaluator of the reconstruction of one cell on [-dx/2, dx/2].
struct CellReconstruction {
  ReconCase tag = ReconCase::Dry;
  double hbar = 0, hL = 0, hR = 0;
  double mbar = 0, mL = 0, mR = 0;
  BottomCell bc;
  double e_max = 50.0;
  bool plain = false;  // bypass the limiter (pure parabolic branches)

  // Case parameters (local coordinates).
  double f = 0.0;       // CaseA plateau factor
  double x1s = 0.0;     // CaseA inner kink (x1*), plateau is [x1s, -x1s]
  double xs = 0.0;      // CaseB/C shore location x* (or y* for exceptional)
  double hs = 0.0;      // exceptional-case kink height h*
  bool anomaly = false; // dispatch fell through an uncovered corner

  bool shore_left() const {  // dry/constant side on the left
    return tag == ReconCase::CaseC || tag == ReconCase::CaseCExceptional;
  }
  bool shore_right() const {
    return tag == ReconCase::CaseB || tag == ReconCase::CaseBExceptional;
  }
  bool has_shore() const { return shore_left() || shore_right(); }

  double disp(double qbar, double qL, double qR, double xL, double xR,
              double x) const {
    return plain ? recon_parabolic(qbar, qL, qR, xL, xR, x)
                 : recon_dispatch(qbar, qL, qR, xL, xR, x, e_max);
  }

  double h_at(double x) const {
    const double half = 0.5 * bc.dx;
    switch (tag) {
      case ReconCase::Dry:
        return 0.0;
      case ReconCase::DirectH:
        return disp(hbar, hL, hR, -half, half, x);
      case ReconCase::EquilibriumHB: {
        if (x == -half) return hL;
        if (x == half) return hR;
        const double bbar = (bc.bL + 4.0 * bc.bC + bc.bR) / 6.0;
        return disp(hbar + bbar, hL + bc.bL, hR + bc.bR, -half, half, x) -
               bc.eval(x);
      }
      case ReconCase::CaseA: {
        if (x == -half) return hL;
        if (x == half) return hR;
        const double hp = f * hbar;
        if (x <= x1s)
          return hL + (x + half) * (hp - hL) / (x1s + half);
        if (x <= -x1s) return hp;
        return hp + (x - (-x1s)) * (hR - hp) / (half - (-x1s));
      }
      case ReconCase::CaseB: {
        if (x == -half) return hL;
        if (x == half) return hR;
        if (x >= xs) return hR;
        return hL + bc.bL +
               (x + half) * (hR + bc.eval(xs) - hL - bc.bL) / (xs + half) -
               bc.eval(x);
      }
      case ReconCase::CaseBExceptional: {
        if (x == -half) return hL;
        if (x == half) return hR;
        if (x >= xs) return hs + (x - xs) * (hR - hs) / (half - xs);
        return hL + bc.bL +
               (x + half) * (hs + bc.eval(xs) - hL - bc.bL) / (xs + half) -
               bc.eval(x);
      }
      case ReconCase::CaseC: {
        if (x == -half) return hL;
        if (x == half) return hR;
        if (x < xs) return hL;
        return hL + bc.eval(xs) +
               (x - xs) * (hR + bc.bR - hL - bc.eval(xs)) / (half - xs) -
               bc.eval(x);
      }
      case ReconCase::CaseCExceptional: {
        if (x == -half) return hL;
        if (x == half) return hR;
        if (x < xs) return hL + (x + half) * (hs - hL) / (xs + half);
        return hs + bc.eval(xs) +
               (x - xs) * (hR + bc.bR - hs - bc.eval(xs)) / (half - xs) -
               bc.eval(x);
      }
    }
    return 0.0;
  }

  double m_at(double x) const {
    const double half = 0.5 * bc.dx;
    switch (tag) {
      case ReconCase::Dry:
        return 0.0;
      case ReconCase::DirectH:
      case ReconCase::EquilibriumHB:
        return disp(mbar, mL, mR, -half, half, x);
      case ReconCase::CaseA: {
        if (x == -half) return mL;
        if (x == half) return mR;
        if (x <= x1s && x1s > -half)
          return recon_dispatch(mbar, mL, mbar, -half, x1s, x, e_max);
        if (x <= -x1s) return mbar;
        return recon_dispatch(mbar, mbar, mR, -x1s, half, x, e_max);
      }
      case ReconCase::CaseB:
      case ReconCase::CaseBExceptional: {
        if (x == -half) return mL;
        if (x == half) return mR;
        // Zero-width constant segment: plain reconstruction over the cell.
        if (half - xs < 1e-12 * bc.dx)
          return recon_dispatch(mbar, mL, mR, -half, half, x, e_max);
        if (x >= xs) return mR;
        const double wet = 0.5 + xs / bc.dx;
        const double madj = (mbar - (0.5 - xs / bc.dx) * mR) / wet;
        return recon_dispatch(madj, mL, mR, -half, xs, x, e_max);
      }
      case ReconCase::CaseC:
      case ReconCase::CaseCExceptional: {
        if (x == -half) return mL;
        if (x == half) return mR;
        if (xs + half < 1e-12 * bc.dx)
          return recon_dispatch(mbar, mL, mR, -half, half, x, e_max);
        if (x < xs) return mL;
        const double wet = 0.5 - xs / bc.dx;
        const double madj = (mbar - mL * (xs / bc.dx + 0.5)) / wet;
        return recon_dispatch(madj, mL, mR, xs, half, x, e_max);
      }
    }
    return 0.0;
  }

  // Evaluation point of h_recon for the source quadrature: the cell center,
  // shifted to the wet midpoint in shore cells.
  double quadrature_center() const {
    const double half = 0.5 * bc.dx;
    if (shore_right()) return 0.5 * (-half + xs);
    if (shore_left()) return 0.5 * (xs + half);
    return 0.0;
  }
};

inline CellReconstruction build_cell_reconstruction(
    double hbar, double hL, double hR, double mbar, double mL, double mR,
    const BottomCell& bc, const Constants& cst = Constants{}) {
  if (hbar < -cst.dry_avg_tol || hL < 0.0 || hR < 0.0)
    throw std::invalid_argument("build_cell_reconstruction: negative input");

  CellReconstruction r;
  r.hbar = hbar;
  r.hL = hL;
  r.hR = hR;
  r.mbar = mbar;
  r.mL = mL;
  r.mR = mR;
  r.bc = bc;
  r.e_max = cst.e_max;
  r.plain = cst.plain_parabolic;

  const double dx = bc.dx;

  // 1. Dry cell.
  if (hbar < cst.dry_avg_tol) {
    r.tag = ReconCase::Dry;
    return r;
  }

  // Pure parabolic mode: no positivity cases, no limiting.
  if (cst.plain_parabolic) {
    r.tag = ReconCase::EquilibriumHB;
    return r;
  }

  const bool neg = (hL > 0.0 && hR > 0.0 && hbar > 0.0)
                       ? parabola_goes_negative(hbar, hL, hR)
                       : false;

  // 2. Case a: interior dip, three linear segments.
  if (hbar < hL && hbar < hR && neg) {
    r.tag = ReconCase::CaseA;
    r.f = std::max(0.5, 2.0 - (hL + hR) / (2.0 * hbar));
    r.x1s = dx * (2.0 * hbar * (r.f - 2.0) + hL + hR) /
            (4.0 * hbar * r.f - 2.0 * (hL + hR));
    return r;
  }

  // 3. Case b: wet left, constant (possibly dry) right.
  if (hR <= hbar && hbar < hL && (hR == 0.0 || neg)) {
    auto xi = solve_shore_cubic(hbar, hR, hL, bc.b2, dx);
    if (xi) {
      r.tag = ReconCase::CaseB;
      r.xs = dx * (*xi - 0.5);
      return r;
    }
    const double xi0sq = (hL - hR) / (-bc.b2 * dx * dx);
    if (bc.b2 < 0.0 && xi0sq < 1.0) {
      const double xi0 = std::sqrt(xi0sq);
      const double hcrit =
          hR + std::sqrt((hL - hR) * (hL - hR) * (hL - hR) /
                         (9.0 * std::fabs(bc.b2) * dx * dx));
      if (hbar > hcrit) {
        r.tag = ReconCase::CaseBExceptional;
        r.xs = dx * (xi0 - 0.5);
        r.hs = 2.0 * (hbar - hcrit) + hR;
        return r;
      }
    }
    r.anomaly = true;  // uncovered corner; fall through to parabolic family
  }

  // 4. Case c: constant (possibly dry) left, wet right.
  if (!r.anomaly && hL <= hbar && hbar < hR && (hL == 0.0 || neg)) {
    auto xi = solve_shore_cubic(hbar, hL, hR, bc.b2, dx);
    if (xi) {
      r.tag = ReconCase::CaseC;
      r.xs = dx * (0.5 - *xi);
      return r;
    }
    const double xi0sq = (hR - hL) / (-bc.b2 * dx * dx);
    if (bc.b2 < 0.0 && xi0sq < 1.0) {
      const double xi0 = std::sqrt(xi0sq);
      const double hcrit =
          hL + std::sqrt((hR - hL) * (hR - hL) * (hR - hL) /
                         (9.0 * std::fabs(bc.b2) * dx * dx));
      if (hbar > hcrit) {
        r.tag = ReconCase::CaseCExceptional;
        r.xs = dx * (0.5 - xi0);
        r.hs = 2.0 * (hbar - hcrit) + hL;
        return r;
      }
    }
    r.anomaly = true;
  }

  // 5. Equilibrium-variable reconstruction when it cannot dip below bottom.
  if (std::min(hL + bc.bL, hR + bc.bR) > std::max(bc.bL, bc.bR)) {
    r.tag = ReconCase::EquilibriumHB;
    return r;
  }

  // 6. Direct reconstruction of h.
  r.tag = ReconCase::DirectH;
  return r;
}

}  // namespace afswe
