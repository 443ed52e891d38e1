#include "gdh/potentials.hpp"

#include <algorithm>
#include <functional>

namespace gdh {

long selection_defect(int r, int g, const std::vector<int>& ks, int weight) {
    long s = 0;
    for (int k : ks) s += k - r - 1;
    return s - static_cast<long>(weight) * (r + 1) * (g - 1);
}

ClosedPotential::ClosedPotential(const HierarchyState& st) : st_(st) { grow(st.spec.N); }

void ClosedPotential::grow(int amax) {
    if (static_cast<int>(res_.size()) > amax) return;
    int target = std::max({amax, 2 * static_cast<int>(res_.size()), st_.spec.N});
    const auto& ts = st_.spec;
    const ESeries unit = st_.unit();
    // the a-th power of the root must be reliable at order -1 for a <= target
    auto root = rth_root(st_.lax(), ts.r, -target, unit);
    res_.assign(static_cast<size_t>(target) + 1, ESeries(st_.vt, ts.D));
    PsDO<ESeries> P = root;
    for (int a = 1; a <= target; ++a) {
        if (a > 1) P = compose(P, root);
        ESeries v = P.residue();  // an exactly-zero residue has no table; keep the shaped zero
        if (v.table())
            res_[static_cast<size_t>(a)] =
                v.map_coeffs<Eps>([a](const Eps& e) { return e.shifted(a - 1); });
    }
}

const ESeries& ClosedPotential::residue(int a) {
    if (a < 1) throw std::invalid_argument("closed potential: residue index must be >= 1");
    grow(a);
    return res_[static_cast<size_t>(a)];
}

const ESeries& ClosedPotential::two_point(int a) {
    if (a >= 1 && a % st_.spec.r == 0)
        throw std::invalid_argument(
            "closed potential: index " + std::to_string(a) +
            " is a multiple of the operator order; its residue carries no two-point data");
    return residue(a);
}

Cyc ClosedPotential::correlator(int g, const std::vector<std::pair<int, int>>& ins) {
    std::vector<int> ks;
    ks.reserve(ins.size());
    int r = st_.spec.r;
    for (auto [a, d] : ins) {
        if (a < 0 || a > r - 1 || d < 0) throw std::invalid_argument("closed potential: bad insertion");
        ks.push_back(a == r - 1 ? r * (d + 1) : a + 1 + r * d);
    }
    return correlator_k(g, std::move(ks));
}

Cyc ClosedPotential::correlator_k(int g, std::vector<int> ks) {
    if (g < 0 || ks.empty()) return Cyc();
    std::sort(ks.begin(), ks.end());
    if (ks.front() < 1) throw std::invalid_argument("closed potential: k-index must be >= 1");
    auto key = std::make_pair(g, ks);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int r = st_.spec.r;
    const int N = st_.spec.N;
    const int n = static_cast<int>(ks.size());
    Cyc out;

    if (ks.front() == 1 && n >= 2) {
        // direct: the monomial shows up in d^2F/dT_1 dT_b with b the largest
        // index; everything but T_1 and T_b must fit the carried times
        std::map<int, int> e;
        for (int k : ks) ++e[k];
        const int b = ks.back();
        const int e1 = e[1];
        const int eb = e[b];
        --e[1];
        --e[b];
        Expo E(static_cast<size_t>(st_.vt->size()), 0);
        int wd = 0;
        for (auto [k, m] : e) {
            if (!m) continue;
            if (k > N)
                throw std::runtime_error("closed potential: correlator needs T_" + std::to_string(k) +
                                         " beyond the carried times");
            E[static_cast<size_t>(k - 1)] = static_cast<std::uint8_t>(m);
            if (k >= 2) wd += m;
        }
        if (wd > st_.spec.D)
            throw std::runtime_error("closed potential: correlator beyond the degree cap");
        Q raw = residue(b).coeff(E).coeff(2 * g - 2);
        Q div = Q(eb) * Q(b == 1 ? e1 - 1 : e1);
        if (!gdh::is_zero(raw)) {
            Q cf = raw / div;
            // back to the t-frame: times the exponent factorials and prefactors
            Cyc val(cf);
            for (int k : ks) val *= time_prefactor(r, k);
            std::map<int, int> full;
            for (int k : ks) ++full[k];
            for (auto [k, m] : full) val *= factorial_q(m);
            out = val;
        }
    } else {
        // no tau^0_0 present (or a single insertion): raise the largest
        // insertion and close with the string equation, which is exact in
        // the t-frame:
        //   <tau0 A+ rest> = <A rest> + sum_E <A+ (E lowered) rest'>
        int A = ks.back();
        ks.pop_back();
        std::vector<int> lead = ks;
        lead.push_back(A + r);
        lead.push_back(1);
        out = correlator_k(g, std::move(lead));
        for (size_t j = 0; j < ks.size(); ++j) {
            if (ks[j] <= r) continue;  // primary, nothing to lower
            if (j + 1 < ks.size() && ks[j + 1] == ks[j]) continue;  // handle each value once
            int mult = 0;
            for (int k : ks)
                if (k == ks[j]) ++mult;
            std::vector<int> low = ks;
            low[j] -= r;
            low.push_back(A + r);
            out -= correlator_k(g, std::move(low)) * Q(mult);
        }
        ks.push_back(A);  // restore for the memo key below
        std::sort(ks.begin(), ks.end());
    }

    memo_[key] = out;
    return out;
}

Q ClosedPotential::coeff(int g, const std::map<int, int>& expo) {
    std::vector<int> ks;
    Cyc pref = Cyc::one();
    Q fact(1);
    for (auto [k, m] : expo) {
        if (!m) continue;
        Cyc ck = time_prefactor(st_.spec.r, k);
        for (int i = 0; i < m; ++i) {
            ks.push_back(k);
            pref *= ck;
        }
        fact *= factorial_q(m);
    }
    if (ks.empty()) return Q(0);
    Cyc val = correlator_k(g, std::move(ks));
    if (val.is_zero()) return Q(0);
    // the T-frame coefficient must be rational; a zeta remnant is a hard error
    return (val * pref.inverse()).rational_part() / fact;
}

QSeries ClosedPotential::closure_slice(int g, int a) {
    const auto& ts = st_.spec;
    QSeries out(st_.vt, ts.D);
    // walk the T_1-free monomials of weighted degree <= D-1; the selection
    // rule prunes the walk (route-A comparisons re-verify the pruned zeros)
    Expo beta(static_cast<size_t>(st_.vt->size()), 0);
    std::vector<int> ks;
    ks.push_back(a);
    long defect = selection_defect(ts.r, g, ks, 2);
    std::function<void(int, int)> walk = [&](int n, int left) {
        if (n > ts.N) {
            if (defect != 0) return;
            std::map<int, int> m;
            m[a] += 1;
            for (int k = 2; k <= ts.N; ++k)
                if (beta[static_cast<size_t>(k - 1)]) m[k] += beta[static_cast<size_t>(k - 1)];
            Q cf = coeff(g, m);
            if (!gdh::is_zero(cf)) out.add_term(beta, cf * Q(beta[static_cast<size_t>(a - 1)] + 1));
            return;
        }
        for (int p = 0; p <= left; ++p) {
            beta[static_cast<size_t>(n - 1)] = static_cast<std::uint8_t>(p);
            defect += static_cast<long>(p) * (n - ts.r - 1);
            walk(n + 1, left - p);
            defect -= static_cast<long>(p) * (n - ts.r - 1);
        }
        beta[static_cast<size_t>(n - 1)] = 0;
    };
    if (a > ts.N)
        throw std::invalid_argument("closed potential: slice index beyond the carried times");
    walk(2, ts.D - 1);
    return out;
}

QSeries ClosedPotential::dF(int g, int a) {
    QSeries I = eps_coeff(residue(a), 2 * g - 2).integrate(VarIndex::T(1));
    // the closure slice is exact one layer below the cap
    return (I + closure_slice(g, a)).truncated(st_.spec.D - 1);
}

QSeries ClosedPotential::hessian_route_b(int a, int b) {
    return dF(0, a).diff(VarIndex::T(b)).truncated(st_.spec.D - 2);
}

SymbolHessian hessian_route_a(const HierarchyState& st, int a, int depth) {
    const int r = st.spec.r;
    if (a < 1) throw std::invalid_argument("hessian: need a >= 1");
    auto L0 = st.lax_stratum(0).symbol();
    const QSeries unit = QSeries::constant(st.vt, st.spec.D, Q(1));
    const int fl = -r - 1 - depth;
    auto cur = frac_pow(L0, a, r, fl, unit).minus_part();
    SymbolHessian out;
    out.H.assign(static_cast<size_t>(r), QSeries(st.vt, st.spec.D));
    for (int b = 1; b <= r - 1; ++b) {
        QSeries h = cur.coeff(-b).scaled_q(Q(b));
        out.H[static_cast<size_t>(b)] = h;
        if (!h.is_zero()) cur -= frac_pow(L0, -b, r, fl, unit).scaled(h).scaled_q(Q(1) / Q(b));
    }
    out.remainder = cur;
    return out;
}

CSeries phi_in_t(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt) {
    return to_t_variables(phi_stratum(phi, g), st.spec.r, std::move(tvt));
}

namespace {
// t^{r-1}_d -> (t^{r-1}_d - delta_{d,0} r shift s) / sqrt(-r)
CSeries ramond_rescaled(const CSeries& p, int r, const VarTablePtr& tvt, bool shift) {
    Cyc inv = Cyc::zeta_pow(r, -(r + 1));  // 1/sqrt(-r)
    std::map<VarIndex, CSeries> im;
    for (const auto& v : tvt->vars) {
        if (v.kind != VarIndex::Kind::t || v.alpha != r - 1) continue;
        CSeries img = CSeries::variable(tvt, p.cap(), v, inv);
        if (shift && v.d == 0) img -= CSeries::variable(tvt, p.cap(), VarIndex::s(), inv * Q(r));
        im[v] = std::move(img);
    }
    return p.subst(im, tvt, p.cap());
}
}  // namespace

CSeries extended_potential(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt) {
    CSeries p = phi_in_t(phi, st, g, tvt);
    return ramond_rescaled(p, st.spec.r, tvt, false)
        .scaled(Cyc::zeta_pow(st.spec.r, static_cast<long>(1 - g) * (st.spec.r + 1)));
}

CSeries conjectural_potential(const ESeries& phi, const HierarchyState& st, int g, VarTablePtr tvt) {
    CSeries p = phi_in_t(phi, st, g, tvt);
    return ramond_rescaled(p, st.spec.r, tvt, true)
        .scaled(Cyc::zeta_pow(st.spec.r, static_cast<long>(g - 1) * (st.spec.r + 1)));
}

CSeries open_potential0(const ESeries& phi, const HierarchyState& st, VarTablePtr tvt) {
    CSeries p = phi_in_t(phi, st, 0, tvt);
    Cyc pre = Cyc::zeta_pow(st.spec.r, -(st.spec.r + 1));
    CSeries shifted = ramond_rescaled(p, st.spec.r, tvt, true);
    CSeries plain = ramond_rescaled(p, st.spec.r, tvt, false);
    return (shifted - plain).scaled(pre);
}

std::vector<Correlator> extract_correlators(const CSeries& pot, int g, int r, int open_weight) {
    std::vector<Correlator> out;
    const auto& vt = pot.table();
    for (const auto& [e, c] : pot.terms()) {
        Correlator corr;
        corr.g = g;
        corr.value = c;
        std::vector<int> ks;
        for (size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            const auto& v = vt->vars[i];
            corr.value *= factorial_q(e[i]);
            if (v.kind == VarIndex::Kind::s) {
                corr.boundary = e[i];
                for (int j = 0; j < e[i]; ++j) ks.push_back(r);  // s sits at the k = r slot
            } else if (v.kind == VarIndex::Kind::t) {
                for (int j = 0; j < e[i]; ++j) {
                    corr.ins.push_back({v.alpha, v.d});
                    ks.push_back(v.alpha == r - 1 ? r * (v.d + 1) : v.alpha + 1 + r * v.d);
                }
            } else {
                throw std::invalid_argument("correlators: potential is not in the t-frame");
            }
        }
        if (selection_defect(r, g, ks, open_weight) != 0)
            throw std::runtime_error("correlators: monomial " + expo_label(e, *vt) +
                                     " violates the dimension selection rule");
        out.push_back(std::move(corr));
    }
    return out;
}

}  // namespace gdh
