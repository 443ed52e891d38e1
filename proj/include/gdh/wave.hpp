#pragma once

#include "gdh/solver.hpp"

namespace gdh {

// Logarithm phi of the wave function, solved directly from
//   d phi / d T_n = eps^{n-1} sum_i R_{n,i} B_i,   phi|_{T>=2 = 0} = 0,
// where (L^{n/r})_+ = sum_i R_{n,i} dx^i and B_i = (dx^i e^phi) e^{-phi}
// obeys B_0 = 1, B_{i+1} = dx B_i + phi_x B_i. Working on phi instead of
// e^phi keeps every layer polynomial in x. The genus strata are
// phi_g = [eps^{g-1}] phi; exponents below -1 are a hard failure.
ESeries solve_phi(const HierarchyState& st);

inline QSeries phi_stratum(const ESeries& phi, int g) { return eps_coeff(phi, g - 1); }

// throws naming the monomial if phi has an eps exponent below -1
void check_phi_genus(const ESeries& phi);

// The grading operator (1/(r+1)) d/dT_{r+1} - eps d/deps - sum_i T_i d/dT_i.
// It preserves both the weight-0 degree and (up to the d/dT_{r+1} term,
// which consumes one unit) the weighted degree.
ESeries grading_apply(const ESeries& s, int r);

// wave function itself on an explicit x-window (exact per x-slice)
ESeries wave_function(const ESeries& phi, int xcap);

}  // namespace gdh
