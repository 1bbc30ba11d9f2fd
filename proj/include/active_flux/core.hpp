#pragma once

// Core types for the 1D shallow water Active Flux solver:
// grid, conserved pairs, characteristic transforms with dry-state
// regularization, and the piecewise-parabolic bottom topography.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afswe {

enum class Boundary { Periodic, DirichletFrozen, OutflowExtrapolate };

struct Constants {
  double g = 9.812;
  double eps_freeze = 1e-7;    // point-value freezing threshold
  double dry_avg_tol = 1e-14;  // below this, water is machine zero
  double e_max = 50.0;         // admissible power-law exponent range [1/e_max, e_max]
  double froude_wb = 1.0;      // well-balance correction gate
  double cfl = 0.7;
  // Pure parabolic reconstruction: no limiting and no positivity-preserving
  // case dispatch (used by the smooth convergence study).
  bool plain_parabolic = false;
};

struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_cells = 1;
  Boundary boundary = Boundary::Periodic;

  double dx() const { return (x_max - x_min) / n_cells; }
  double interface_x(int i) const { return x_min + i * dx(); }
  double center_x(int i) const { return x_min + (i + 0.5) * dx(); }
};

struct ConservedPair {
  double h = 0.0;
  double m = 0.0;
};

// Clamp tiny negative heights (round-off) to an exactly dry state; anything
// more negative indicates a bug upstream. Dry states carry no momentum.
inline ConservedPair make_conserved(double h, double m, double tol = 1e-14) {
  if (!(h >= -tol))
    throw std::invalid_argument("make_conserved: h = " + std::to_string(h) +
                                " below -" + std::to_string(tol));
  if (h <= 0.0) return {0.0, 0.0};
  return {h, m};
}

struct CharPair {
  double Qp = 0.0;  // 2c + v
  double Qm = 0.0;  // 2c - v
};

inline CharPair to_char(const ConservedPair& q, double g) {
  if (q.h <= 0.0) return {0.0, 0.0};
  const double c = std::sqrt(g * q.h);
  const double v = q.m / q.h;
  return {2.0 * c + v, 2.0 * c - v};
}

inline ConservedPair from_char(double Qp, double Qm, double g) {
  const double s = Qp + Qm;  // = 4c
  if (s <= 0.0) return {0.0, 0.0};
  const double c = 0.25 * s;
  const double v = 0.5 * (Qp - Qm);
  const double h = c * c / g;
  return {h, h * v};
}

struct SpeedPair {
  double lp = 0.0;  // v + c
  double lm = 0.0;  // v - c
};

// Speeds from heights below the dry tolerance are pure round-off noise;
// they are zeroed.
inline SpeedPair char_speeds(const ConservedPair& q, double g,
                             double dry_tol = 1e-14) {
  if (q.h < dry_tol) return {0.0, 0.0};
  const double c = std::sqrt(g * q.h);
  const double v = q.m / q.h;
  return {v + c, v - c};
}

inline void physical_flux(const ConservedPair& q, double g, double& fh,
                          double& fm) {
  if (q.h <= 0.0) {
    fh = 0.0;
    fm = 0.0;
    return;
  }
  fh = q.m;
  fm = q.m * q.m / q.h + 0.5 * g * q.h * q.h;
}

// Globally continuous piecewise-parabolic bottom. Each cell i carries the
// parabola b(x) = b0 + b1*x + b2*x^2 in the cell-local coordinate
// x in [-dx/2, dx/2], interpolating the shared interface samples and the
// center sample. The interface samples are the single source of truth, so
// continuity across interfaces holds bit-exactly. Two ghost cells are kept
// on either side.
class BottomTopography {
 public:
  static constexpr int kGhost = 2;

  BottomTopography() = default;

  static BottomTopography project(const std::function<double(double)>& b,
                                  const Grid& grid) {
    BottomTopography out;
    out.grid_ = grid;
    const int n = grid.n_cells;
    const int G = kGhost;
    out.b_if_.assign(n + 2 * G + 1, 0.0);
    out.b_c_.assign(n + 2 * G, 0.0);

    if (grid.boundary == Boundary::Periodic) {
      // Sample one period and wrap bit-identically, so that ghost parabolae
      // coincide with their periodic images even when b(x_max) != b(x_min)
      // in the last ulp.
      std::vector<double> bi(n), bc(n);
      for (int i = 0; i < n; ++i) {
        bi[i] = b(grid.interface_x(i));
        bc[i] = b(grid.center_x(i));
      }
      for (int i = -G; i <= n + G; ++i)
        out.b_if_[i + G] = bi[((i % n) + n) % n];
      for (int i = -G; i < n + G; ++i)
        out.b_c_[i + G] = bc[((i % n) + n) % n];
    } else {
      for (int i = -G; i <= n + G; ++i) out.b_if_[i + G] = b(grid.interface_x(i));
      for (int i = -G; i < n + G; ++i) out.b_c_[i + G] = b(grid.center_x(i));
    }
    for (double v : out.b_if_)
      if (!std::isfinite(v))
        throw std::invalid_argument("bottom sample not finite");
    for (double v : out.b_c_)
      if (!std::isfinite(v))
        throw std::invalid_argument("bottom sample not finite");

    const double dx = grid.dx();
    out.b1_.assign(n + 2 * G, 0.0);
    out.b2_.assign(n + 2 * G, 0.0);
    for (int i = -G; i < n + G; ++i) {
      const double bL = out.interface_sample(i);
      const double bR = out.interface_sample(i + 1);
      const double bc = out.center_sample(i);
      out.b1_[i + G] = (bR - bL) / dx;
      out.b2_[i + G] = 2.0 * (bR - 2.0 * bc + bL) / (dx * dx);
    }
    return out;
  }

  const Grid& grid() const { return grid_; }
  double dx() const { return grid_.dx(); }

  // Interface i+1/2 sample, i in [-kGhost, n+kGhost].
  double interface_sample(int i) const { return b_if_[i + kGhost]; }
  // Center sample of cell i, i in [-kGhost, n+kGhost-1].
  double center_sample(int i) const { return b_c_[i + kGhost]; }
  double b0(int i) const { return b_c_[i + kGhost]; }
  double b1(int i) const { return b1_[i + kGhost]; }
  double b2(int i) const { return b2_[i + kGhost]; }

  // Evaluate cell i's parabola at the local coordinate x in [-dx/2, dx/2].
  // Endpoints return the stored interface samples bit-exactly.
  double eval_local(int i, double x) const {
    const double half = 0.5 * dx();
    if (x == -half) return interface_sample(i);
    if (x == half) return interface_sample(i + 1);
    return b0(i) + x * (b1(i) + x * b2(i));
  }

  double deriv_local(int i, double x) const { return b1(i) + 2.0 * x * b2(i); }

  // Owning cell of a global position; exact interface positions belong to the
  // cell on their right. Clamped to the ghost range.
  int cell_of(double x) const {
    const int i = (int)std::floor((x - grid_.x_min) / dx());
    return std::clamp(i, -kGhost, grid_.n_cells + kGhost - 1);
  }

  double local_coord(int i, double x) const { return x - grid_.center_x(i); }

  double eval_global(double x) const {
    const int i = cell_of(x);
    return eval_local(i, local_coord(i, x));
  }

  double deriv_global(double x) const {
    const int i = cell_of(x);
    return deriv_local(i, local_coord(i, x));
  }

 private:
  Grid grid_;
  std::vector<double> b_if_, b_c_, b1_, b2_;
};

// Cell averages, shared interface point values, freeze bookkeeping.
struct SolutionState {
  std::vector<ConservedPair> avg;     // n_cells
  std::vector<ConservedPair> pts;     // n_cells + 1 (periodic: [n] == [0])
  std::vector<ConservedPair> frozen;  // last accepted value per point
  std::vector<char> is_frozen;        // point currently held at frozen value
  double t = 0.0;
};

}  // namespace afswe
