#pragma once

#include "gdh/tseries.hpp"

namespace gdh {

// Change of variables between the hierarchy times T_k and the intersection
// variables t^a_d, over Q[zeta] with zeta^{2(r+1)} = -r:
//   k = a+1+rd (a <= r-2):  T_k = zeta^{-(3k-(r+1)-2d(r+1))} / k!_r * t^a_d,
//                           k!_r = prod_{i=0..d} (a+1+ri)
//   k = mr:                 T_k = zeta^{-m(r-2)} / (m! r^m) * t^{r-1}_{m-1}
// T_1 = t^0_0 with prefactor 1.

// the t-variable T_k maps to
VarIndex time_image(int r, int k);
// the prefactor c_k in T_k = c_k * t^a_d
Cyc time_prefactor(int r, int k);

// table of the images of T_1..T_N (ordered by VarIndex), optionally with s
VarTablePtr tvar_table(int r, int N, bool with_s);

// substitute T_k -> c_k t^a_d into a series over the times
CSeries to_t_variables(const QSeries& s, int r, VarTablePtr tvt);
CSeries to_t_variables(const CSeries& s, int r, VarTablePtr tvt);

}  // namespace gdh
