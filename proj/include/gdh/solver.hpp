#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gdh/psdo.hpp"
#include "gdh/tseries.hpp"

namespace gdh {

// Truncation parameters for a hierarchy solve.
//   r: order of the Lax operator
//   N: number of times T_1..T_N carried
//   D: cap on the weighted T-degree (T_1 is free, see TSeries)
//   G: highest genus later extracted from the wave function
//   M: extra operator-order margin below the minimum the solve needs;
//      results must not depend on it (stability criterion)
//   J: eps window half-width for clamped stability probes
struct TruncationSpec {
    int r = 2;
    int N = 3;
    int D = 3;
    int G = 2;
    int M = 0;
    int J = 2;

    void validate() const;
};

struct HierarchyState {
    TruncationSpec spec;
    VarTablePtr vt;          // T_1..T_N
    std::vector<ESeries> f;  // coefficients of dx^0..dx^{r-2}

    ESeries unit() const { return ESeries::constant(vt, spec.D, Eps(Q(1))); }
    PsDO<ESeries> lax() const;
    // stratum f_i^{[j]}, the coefficient of eps^{i-r+j} in f_i
    QSeries stratum(int i, int j) const;
    // operator stratum: j = 0 gives dx^r + sum f_i^{[0]} dx^i, j >= 1 gives
    // sum f_i^{[j]} dx^i
    PsDO<QSeries> lax_stratum(int j) const;
};

// L at T_{>=2} = 0: dx^r + eps^{-r} r x
PsDO<ESeries> initial_operator(const TruncationSpec& ts, VarTablePtr vt);

// (L^{n/r})_+ for n = 1..N, sharing one root computation
std::vector<PsDO<ESeries>> flow_plus_parts(const PsDO<ESeries>& L, const TruncationSpec& ts,
                                           const ESeries& unit);

// eps^{n-1} [(L^{n/r})_+, L]; throws unless the commutator has orders in
// [0, r-2] only
PsDO<ESeries> flow_rhs(const PsDO<ESeries>& L, const PsDO<ESeries>& plus_part, int n, int r);

// Integrate the hierarchy from the initial operator, layer by layer in the
// weighted T-degree. Every monomial reachable through several flows is
// cross-checked across all of them; a mismatch is a hard failure. An eps
// window, if given, clamps the state after each layer (stability probes
// only). Honors GDH_THREADS for the per-flow work inside a layer.
HierarchyState solve_hierarchy(const TruncationSpec& ts,
                               std::optional<std::pair<int, int>> eps_window = std::nullopt);

// Fill weighted-degree layer `layer`+1 of `x` from its flow derivatives:
// rhs[n] (n = 2..N, index n) must hold d x / d T_n, exact at weighted degree
// `layer`. Every monomial reachable through several flows is cross-checked
// across all of them; disagreement is a hard failure naming the monomial.
void integrate_layer(ESeries& x, const std::vector<ESeries>& rhs, int layer, int N,
                     const std::string& what);

// Hard check of the eps stratification f_i = sum_{j>=0} eps^{i-r+j} f_i^{[j]}
// (no exponent below i-r); throws naming the offender.
void check_eps_pattern(const HierarchyState& st);

// true if the series has a term with a positive power of v
template <class C>
bool depends_on(const TSeries<C>& s, const VarIndex& v) {
    int i = s.table()->require(v);
    for (const auto& [e, c] : s.terms())
        if (e[static_cast<size_t>(i)] != 0) return true;
    return false;
}

std::string expo_label(const Expo& e, const VarTable& vt);

}  // namespace gdh
