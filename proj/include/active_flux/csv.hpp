#pragma once

// Snapshot emission. One file, two sections: point values first, cell
// averages second, both with header rows and 17-significant-digit floats
// (lossless for binary64).

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "active_flux/driver.hpp"

namespace afswe {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void emit_snapshot(const Simulation& sim, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  const SolutionState& st = sim.state();
  const Grid& grid = sim.grid();
  const BottomTopography& bt = sim.bottom();
  const int n = grid.n_cells;
  const ReconField recon = sim.build_recon_field();

  out << "x,h,m,b,level,frozen\n";
  for (int j = 0; j <= n; ++j) {
    const double b = bt.interface_sample(j);
    const ConservedPair& q = st.pts[j];
    const int fr = (j < (int)st.is_frozen.size()) ? st.is_frozen[j] : 0;
    out << fmt17(grid.interface_x(j)) << ',' << fmt17(q.h) << ','
        << fmt17(q.m) << ',' << fmt17(b) << ',' << fmt17(q.h + b) << ','
        << fr << '\n';
  }
  out << '\n';
  out << "x_center,h_avg,m_avg,case_tag\n";
  for (int i = 0; i < n; ++i) {
    out << fmt17(grid.center_x(i)) << ',' << fmt17(st.avg[i].h) << ','
        << fmt17(st.avg[i].m) << ',' << recon_case_name(recon.cell(i).tag)
        << '\n';
  }
  if (!out) throw std::runtime_error("write failure on " + path);
}

}  // namespace afswe
