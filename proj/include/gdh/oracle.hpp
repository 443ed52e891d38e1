#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gdh/potentials.hpp"

namespace gdh {

// Genus-0 closed correlators rebuilt without operator roots: every
// correlator with a descendent insertion is reduced by the genus-0
// topological recursion relation, down to the descendent-free slice, which
// is the only hierarchy input (read off the solved state, not hardcoded;
// the exchange relations alone cannot pin the primary n-points, so they are
// genuinely seed data). Used purely for cross-validation of the pipeline.
class ClosedOracle {
public:
    explicit ClosedOracle(ClosedPotential& F);

    // < prod tau^{a_i}_{d_i} >_0 in the t-frame
    Q value(std::vector<std::pair<int, int>> ins);

    const std::vector<std::vector<Q>>& eta() const { return eta_; }

private:
    Q primary(std::vector<int> alphas);  // all d = 0

    int r_;
    ClosedPotential& F_;
    std::vector<std::vector<Q>> eta_;      // eta_{mu nu} = <tau^0_0 tau^mu_0 tau^nu_0>
    std::vector<std::vector<Q>> eta_inv_;  // exact inverse
    std::map<std::vector<int>, Q> primaries_;
    std::map<std::vector<std::pair<int, int>>, Q> memo_;
};

// Classical genus-0 open intersection numbers <tau_{d_1}...tau_{d_l} sigma^k>
// via the open string equation and the genus-0 open topological recursion
//   dF/dt_{p+1} = <<tau_p tau_0>> dF/dt_0 + dF/dt_p dF/ds,
// with the closed two-point input read from a solved r=2 hierarchy.
class OpenOracleR2 {
public:
    explicit OpenOracleR2(ClosedPotential& F);

    Q value(std::vector<int> ds, int k);

private:
    Q closed0(std::vector<int> ds);  // < prod tau_{d_i} >^c_0

    ClosedPotential& F_;
    std::map<std::pair<std::vector<int>, int>, Q> memo_;
};

// The order-two identification: <tau...sigma^k>^{1/2,o}_g equals
// (-2)^{(g+k-1)/2} times the classical number; g+k must be odd (the
// classical number vanishes otherwise, which callers assert instead).
Q r2_bridge(const Q& classical, int g, int k);

}  // namespace gdh
