#pragma once

// Point value update: the O(t^3) characteristic evolution operator with
// predictor step, entropy fix, near-vacuum guard, subtraction-based
// well-balancing and freezing of near-dry point values.

#include <cmath>
#include <vector>

#include "active_flux/core.hpp"
#include "active_flux/reconstruction.hpp"

namespace afswe {

// Snapshot of all cell reconstructions at t^n, evaluable at any global
// position within the ghost halo.
struct ReconField {
  const BottomTopography* bt = nullptr;
  std::vector<CellReconstruction> cells;     // index i + kGhost
  std::vector<ConservedPair> pts;            // interface values, index j + kGhost

  static constexpr int G = BottomTopography::kGhost;

  const CellReconstruction& cell(int i) const { return cells[i + G]; }

  ConservedPair at(double x) const {
    const int i = bt->cell_of(x);
    double xl = bt->local_coord(i, x);
    const double half = 0.5 * bt->dx();
    xl = std::clamp(xl, -half, half);
    const CellReconstruction& c = cell(i);
    return {c.h_at(xl), c.m_at(xl)};
  }

  // Exact stored interface value (no reconstruction round trip).
  ConservedPair at_interface(int j) const { return pts[j + G]; }
};

// Fictitious lake-at-rest data h = max(0, W - b(x)), v = 0, used by the
// well-balancing correction.
struct LakeField {
  const BottomTopography* bt = nullptr;
  double W = 0.0;

  ConservedPair at(double x) const {
    const double h = W - bt->eval_global(x);
    return h > 0.0 ? ConservedPair{h, 0.0} : ConservedPair{0.0, 0.0};
  }

  ConservedPair at_interface(int j) const {
    const double h = W - bt->interface_sample(j);
    return h > 0.0 ? ConservedPair{h, 0.0} : ConservedPair{0.0, 0.0};
  }
};

struct CandidateSet {
  double lam_p = 0.0, lam_m = 0.0;  // final speeds lambda*_+/-
  double src_p = 0.0, src_m = 0.0;  // sources S*_+/-
};

// One candidate of the evolution operator at interface position x0.
// Base speeds are estimated from the data at x0 + shift (entropy-fix
// variants use shift = +/-dx); the predictor then locates the footpoints
// and re-evaluates speeds there. dbdx0 is d(b)/dx at x0 (right cell).
template <class Field>
CandidateSet compute_candidate(const Field& field, const BottomTopography& bt,
                               double x0, const ConservedPair& q_shift,
                               double dbdx0, double t, double g,
                               double dry_tol) {
  CandidateSet out;
  // No characteristic information can come from vacuum: a candidate whose
  // speed estimates derive from dry data carries zero speeds throughout.
  if (q_shift.h < dry_tol) return out;

  const SpeedPair base = char_speeds(q_shift, g, dry_tol);
  const double Sp0 = -g * dbdx0;  // S_+ = -g b'
  const double Sm0 = +g * dbdx0;  // S_- = +g b'
  const double lam_base[2] = {base.lp, base.lm};
  double lam_star[2], src_star[2];
  for (int fam = 0; fam < 2; ++fam) {  // 0: +, 1: -
    const double li = lam_base[fam];
    // Predictor: local linearization of both characteristic fields.
    const ConservedPair qp = field.at(x0 - 0.5 * (li + base.lp) * t);
    const ConservedPair qm = field.at(x0 - 0.5 * (li + base.lm) * t);
    const double Qp_star = to_char(qp, g).Qp + 0.5 * t * Sp0;
    const double Qm_star = to_char(qm, g).Qm + 0.5 * t * Sm0;
    const double c_star = 0.25 * (Qp_star + Qm_star);
    double lam = 0.0;
    if (c_star > 0.0) {
      const double h_star = c_star * c_star / g;
      if (h_star >= dry_tol) {
        const double v_star = 0.5 * (Qp_star - Qm_star);
        lam = (fam == 0) ? v_star + c_star : v_star - c_star;
      }
    }
    lam_star[fam] = lam;
    src_star[fam] =
        (fam == 0 ? -g : +g) * bt.deriv_global(x0 - 0.5 * li * t);
  }
  out.lam_p = lam_star[0];
  out.lam_m = lam_star[1];
  out.src_p = src_star[0];
  out.src_m = src_star[1];
  return out;
}

// Entropy fix: of the two shifted candidates, take the one with the larger
// total speed; ties go to the +dx set.
inline const CandidateSet& entropy_fix_select(const CandidateSet& plus_dx,
                                              const CandidateSet& minus_dx) {
  const double sp = std::fabs(plus_dx.lam_p) + std::fabs(plus_dx.lam_m);
  const double sm = std::fabs(minus_dx.lam_p) + std::fabs(minus_dx.lam_m);
  return (sm > sp) ? minus_dx : plus_dx;
}

// Raw point evolution at interface j (position x0) over time t.
// If any selected speed is exactly zero, a characteristic footpoint landed on
// dry ground: the point keeps its current value for this step (vacuum guard);
// the stored value is returned directly to preserve bit-exact stationarity.
template <class Field>
ConservedPair evolve_point_raw(const Field& field, const BottomTopography& bt,
                               int j, double t, const Constants& cst,
                               bool entropy_fix, bool* used_guard = nullptr) {
  const double x0 = bt.grid().interface_x(j);
  const double dx = bt.dx();
  const double dbdx0 = bt.deriv_local(j, -0.5 * dx);  // right cell's slope
  if (used_guard) *used_guard = false;

  CandidateSet sel;
  if (entropy_fix) {
    const CandidateSet cp = compute_candidate(
        field, bt, x0, field.at_interface(j + 1), dbdx0, t, cst.g,
        cst.dry_avg_tol);
    const CandidateSet cm = compute_candidate(
        field, bt, x0, field.at_interface(j - 1), dbdx0, t, cst.g,
        cst.dry_avg_tol);
    sel = entropy_fix_select(cp, cm);
  } else {
    sel = compute_candidate(field, bt, x0, field.at_interface(j), dbdx0, t,
                            cst.g, cst.dry_avg_tol);
  }

  if (sel.lam_p == 0.0 || sel.lam_m == 0.0) {
    if (used_guard) *used_guard = true;
    return field.at_interface(j);
  }

  const double Qp =
      to_char(field.at(x0 - sel.lam_p * t), cst.g).Qp + t * sel.src_p;
  const double Qm =
      to_char(field.at(x0 - sel.lam_m * t), cst.g).Qm + t * sel.src_m;
  return from_char(Qp, Qm, cst.g);
}

// Subtraction-based well-balance correction at interface j. The same
// operator is applied to fictitious lake-at-rest data with the local water
// level W; its (spurious) evolution is subtracted from the raw result.
inline ConservedPair well_balance_correct(const ReconField& field,
                                          const BottomTopography& bt, int j,
                                          double t, const Constants& cst,
                                          const ConservedPair& raw,
                                          bool raw_used_guard) {
  const ConservedPair q0 = field.at_interface(j);
  if (!(q0.h > 0.0)) return raw;
  if (raw_used_guard) return raw;  // stationary by construction
  const double v = q0.m / q0.h;
  const double froude = std::fabs(v) / std::sqrt(cst.g * q0.h);
  if (!(froude < cst.froude_wb)) return raw;

  LakeField lake{&bt, q0.h + bt.interface_sample(j)};
  bool lake_guard = false;
  const ConservedPair ev =
      evolve_point_raw(lake, bt, j, t, cst, /*entropy_fix=*/true, &lake_guard);
  if (!(ev.h > 0.0)) return raw;

  const double m_wb = raw.m - raw.h * ev.m / ev.h;
  double h_wb = raw.h - (ev.h - q0.h);
  if (h_wb <= 0.0) return {0.0, 0.0};
  return {h_wb, m_wb};
}

struct PointUpdateResult {
  std::vector<ConservedPair> pts_half;  // n_cells + 1
  std::vector<ConservedPair> pts_full;
  std::vector<char> frozen;  // per-point freeze flag
  int n_frozen = 0;
  int n_guarded = 0;
};

// Update all interface point values to t + dt/2 and t + dt from the t^n
// reconstruction snapshot. Applies entropy fix, vacuum guard, well-balance
// correction, and freezing below eps_freeze.
inline PointUpdateResult update_all_points(const ReconField& field,
                                           const BottomTopography& bt,
                                           double dt, const Constants& cst,
                                           bool well_balance = true) {
  const Grid& grid = bt.grid();
  const int n = grid.n_cells;
  PointUpdateResult out;
  out.pts_half.resize(n + 1);
  out.pts_full.resize(n + 1);
  out.frozen.assign(n + 1, 0);

  const int j_lo = (grid.boundary == Boundary::DirichletFrozen) ? 1 : 0;
  const int j_hi = (grid.boundary == Boundary::DirichletFrozen) ? n - 1
                   : (grid.boundary == Boundary::Periodic)      ? n - 1
                                                                : n;

  for (int j = 0; j <= n; ++j) {
    out.pts_half[j] = field.at_interface(j);
    out.pts_full[j] = field.at_interface(j);
  }

  for (int j = j_lo; j <= j_hi; ++j) {
    bool guard_half = false, guard_full = false;
    ConservedPair qh =
        evolve_point_raw(field, bt, j, 0.5 * dt, cst, true, &guard_half);
    ConservedPair qf =
        evolve_point_raw(field, bt, j, dt, cst, true, &guard_full);
    if (guard_half || guard_full) {
      // The solution at this location is stationary over the whole step;
      // both stages keep the stored value, so the interface flux is
      // time-constant.
      ++out.n_guarded;
      out.pts_half[j] = field.at_interface(j);
      out.pts_full[j] = field.at_interface(j);
      continue;
    }
    if (well_balance) {
      qh = well_balance_correct(field, bt, j, 0.5 * dt, cst, qh, guard_half);
      qf = well_balance_correct(field, bt, j, dt, cst, qf, guard_full);
    }

    const ConservedPair cur = field.at_interface(j);
    const bool cur_dry = (cur.h == 0.0);
    if ((qh.h < cst.eps_freeze || qf.h < cst.eps_freeze) && !cur_dry) {
      // Keep the previously accepted value for both stages.
      out.pts_half[j] = cur;
      out.pts_full[j] = cur;
      out.frozen[j] = 1;
      ++out.n_frozen;
    } else if (cur_dry && (qh.h < cst.eps_freeze || qf.h < cst.eps_freeze)) {
      out.pts_half[j] = cur;
      out.pts_full[j] = cur;
    } else {
      if (qh.h <= 0.0) qh = {0.0, 0.0};
      if (qf.h <= 0.0) qf = {0.0, 0.0};
      out.pts_half[j] = qh;
      out.pts_full[j] = qf;
    }
  }

  if (grid.boundary == Boundary::DirichletFrozen) {
    // A wet boundary point evolves like an interior one; the prescribed data
    // enter through the ghost values (one component per incoming
    // characteristic), so no component is reset here. Dry or otherwise
    // degenerate boundary points keep the stored value.
    for (const int j : {0, n}) {
      const ConservedPair cur = field.at_interface(j);
      if (!(cur.h > 0.0)) continue;

      bool guard_half = false, guard_full = false;
      ConservedPair qh =
          evolve_point_raw(field, bt, j, 0.5 * dt, cst, true, &guard_half);
      ConservedPair qf =
          evolve_point_raw(field, bt, j, dt, cst, true, &guard_full);
      if (guard_half || guard_full) continue;
      if (well_balance) {
        qh = well_balance_correct(field, bt, j, 0.5 * dt, cst, qh, guard_half);
        qf = well_balance_correct(field, bt, j, dt, cst, qf, guard_full);
      }
      if (qh.h <= 0.0 || qf.h <= 0.0) continue;  // keep the stored state
      out.pts_half[j] = qh;
      out.pts_full[j] = qf;
    }
  }

  if (grid.boundary == Boundary::Periodic) {
    out.pts_half[n] = out.pts_half[0];
    out.pts_full[n] = out.pts_full[0];
    out.frozen[n] = out.frozen[0];
  }
  return out;
}

}  // namespace afswe
