#pragma once

#include <array>
#include <map>
#include <vector>

#include "gdh/dictionary.hpp"
#include "gdh/solver.hpp"
#include "gdh/wave.hpp"
#include "gdh/zseries.hpp"

namespace gdh {

// selection rule: a monomial T_{k_1}...T_{k_n} can appear in F_g (closed,
// weight 2) or phi_g (open, weight 1) only if
//   sum_i (k_i - r - 1) = weight * (r+1) * (g-1).
// returns the defect (0 when allowed)
long selection_defect(int r, int g, const std::vector<int>& ks, int weight);

// The closed potential F = sum_g eps^{2g-2} F_g of the hierarchy solution,
// reconstructed from eps^{a-1} res L^{a/r} = d^2F/dT_1 dT_a. Slices without
// T_1 close through the string equation, which is exact in the t-frame; the
// recursion is memoized on the multiset of k-indices (T_k <-> t^a_d).
class ClosedPotential {
public:
    explicit ClosedPotential(const HierarchyState& st);

    // correlator in the t-frame, insertions given as k-indices; Cyc-valued
    // internally, rational on every dimension-allowed monomial
    Cyc correlator_k(int g, std::vector<int> ks);
    // correlator with insertions (a, d)
    Cyc correlator(int g, const std::vector<std::pair<int, int>>& ins);
    // coefficient of prod T_k^{e_k} in F_g (T-frame, rational)
    Q coeff(int g, const std::map<int, int>& expo);

    // T_1-free slice of dF_g/dT_a, exact to weighted degree D-1
    QSeries closure_slice(int g, int a);
    // dF_g/dT_a, exact to weighted degree D-1 (returned at that cap)
    QSeries dF(int g, int a);
    // d^2 F_0/dT_a dT_b from T_1-integration plus string closure; exact to
    // weighted degree D-2 (returned at that cap)
    QSeries hessian_route_b(int a, int b);

    // eps^{a-1} res L^{a/r}; the table grows (and the root deepens) on demand
    const ESeries& residue(int a);
    // the same residue, rejecting indices where it vanishes identically
    // (multiples of r carry no two-point data)
    const ESeries& two_point(int a);

    const HierarchyState& state() const { return st_; }

private:
    void grow(int amax);

    const HierarchyState& st_;
    std::vector<ESeries> res_;  // index a; [0] unused
    std::map<std::pair<int, std::vector<int>>, Cyc> memo_;
};

// Genus-0 Hessian row a from the symbol of the genus-0 operator: the unique
// rationals H_ab with (L0^{a/r})_- = sum_{b=1..r-1} (1/b) H_ab L0^{-b/r}
// modulo z^{-r-1}; the remainder's z^{-1}..z^{-r} coefficients are the
// membership check.
struct SymbolHessian {
    std::vector<QSeries> H;      // index b, [0] unused
    ZSeries<QSeries> remainder;  // reliable down to its floor
};
SymbolHessian hessian_route_a(const HierarchyState& st, int a, int depth = 0);

// ---- potentials in the t-frame -------------------------------------------

// dictionary image of a wave-log stratum: phi_g as a series in t^a_d
CSeries phi_in_t(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt);

// extended closed potential, genus g: (-r)^{(1-g)/2} phi_g with
// t^{r-1}_d -> t^{r-1}_d / sqrt(-r)
CSeries extended_potential(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt);

// conjectural open potential, genus g: (-r)^{(g-1)/2} phi_g with
// t^{r-1}_d -> (t^{r-1}_d - delta_{d,0} r s) / sqrt(-r)   (table must hold s)
CSeries conjectural_potential(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt);

// genus-0 open potential: the boundary-shifted part of the conjectural one,
// i.e. conjectural_potential(0) minus its unshifted (s-free substitution) form
CSeries open_potential0(const ESeries& phi, const HierarchyState& st, VarTablePtr tvt);

// ---- correlator extraction ------------------------------------------------

struct Correlator {
    int g = 0;
    std::vector<std::array<int, 2>> ins;  // (a, d) with multiplicity expanded
    int boundary = 0;                     // power of s
    Cyc value;
};

// read correlators off a potential in the t-frame (coefficient times the
// factorials of the multiplicities); `open_weight` selects which selection
// rule the monomials are checked against (1 for open/extended, 2 for closed)
std::vector<Correlator> extract_correlators(const CSeries& pot, int g, int r, int open_weight);

}  // namespace gdh
