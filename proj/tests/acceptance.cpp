#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gdh/jetpoly.hpp"  // before the symbol layer: ZSeries needs the jet ring traits

#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "gdh/checks.hpp"
#include "gdh/oracle.hpp"
#include "gdh/state_io.hpp"

using namespace gdh;

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

void report(int idx, const char* what, bool ok, long long ms) {
    std::printf("[PRIMARY %d] %s: %s (%lld ms)\n", idx, what, ok ? "PASS" : "FAIL", ms);
    std::fflush(stdout);
    CHECK(ok);
}

// shared solved states: one per operator order, reused across criteria
struct Solved {
    HierarchyState st;
    ESeries phi;
};
const Solved& fixture(int r) {
    static std::map<int, Solved> cache;
    auto it = cache.find(r);
    if (it == cache.end()) {
        TruncationSpec ts;
        ts.r = r;
        ts.N = r == 2 ? 7 : 8;
        ts.D = 6;
        ts.G = 2;
        HierarchyState st = solve_hierarchy(ts);
        ESeries phi = solve_phi(st);
        it = cache.emplace(r, Solved{std::move(st), std::move(phi)}).first;
    }
    return it->second;
}

bool check_passes(const CheckReport& rep) {
    for (const auto& f : rep.failures) std::printf("    %s\n", f.c_str());
    return rep.pass;
}

Q rnd_q(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    return make_q(num(rng), den(rng));
}

QSeries rnd_series(std::mt19937& rng, const VarTablePtr& vt, int cap, int nterms) {
    QSeries s(vt, cap);
    std::uniform_int_distribution<int> ed(0, 2);
    for (int t = 0; t < nterms; ++t) {
        Expo e(static_cast<size_t>(vt->size()), 0);
        for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ed(rng));
        if (s.wdeg(e) > cap) continue;
        s.add_term(e, rnd_q(rng));
    }
    return s;
}

JetCoeff rnd_jet(std::mt19937& rng) {
    std::uniform_int_distribution<int> fld(0, 1), k(0, 2), m(1, 2), nt(1, 2);
    JetCoeff out;
    for (int t = 0, n = nt(rng); t < n; ++t) {
        JetCoeff mono = JetCoeff(rnd_q(rng));
        for (int p = 0, e = m(rng); p < e; ++p) mono = mono * JetCoeff::gen(fld(rng), k(rng));
        out = out + mono;
    }
    return out;
}

HierarchyState clamp_state(HierarchyState st, int lo, int hi) {
    for (auto& fi : st.f)
        fi = fi.map_coeffs<Eps>([lo, hi](const Eps& e) { return e.clamped(lo, hi); });
    return st;
}

bool states_equal(const HierarchyState& a, const HierarchyState& b) {
    for (size_t i = 0; i < a.f.size(); ++i)
        if (!(a.f[i] == b.f[i])) return false;
    return true;
}

}  // namespace

TEST_CASE("criterion 1: root of the initial operator") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r = 2; r <= 5; ++r) {
        TruncationSpec ts;
        ts.r = r;
        ts.N = r + 1;
        ts.D = 3;
        auto vt = times_table(ts.N);
        auto L = initial_operator(ts, vt);
        ESeries unit = ESeries::constant(vt, ts.D, Eps(Q(1)));
        auto B = rth_root(L, r, -r, unit);
        // expected: dx + eps^-r x dx^{1-r} - ((r-1)/2) eps^-r dx^{-r}
        ok = ok && B.coeff(1) == unit;
        ok = ok && B.coeff(1 - r) == ESeries::variable(vt, ts.D, VarIndex::T(1), Eps(-r, Q(1)));
        ok = ok && B.coeff(-r) == ESeries::constant(vt, ts.D, Eps(-r, -make_q(r - 1, 2)));
        for (int k = 2 - r; k <= 0; ++k) ok = ok && B.coeff(k).is_zero();
    }
    report(1, "root fixture at the initial point, orders 2..5", ok, ms_since(t0));
}

TEST_CASE("criterion 2: first nontrivial plus part at the initial point") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r = 2; r <= 5; ++r) {
        TruncationSpec ts;
        ts.r = r;
        ts.N = r + 1;
        ts.D = 3;
        auto vt = times_table(ts.N);
        auto L = initial_operator(ts, vt);
        ESeries unit = ESeries::constant(vt, ts.D, Eps(Q(1)));
        auto P = flow_plus_parts(L, ts, unit)[static_cast<size_t>(r)];
        // expected exactly: dx^{r+1} + (r+1) eps^-r x dx + (r+1)/2 eps^-r
        PsDO<ESeries> want;
        want.add_term(r + 1, unit);
        want.add_term(1, ESeries::variable(vt, ts.D, VarIndex::T(1), Eps(-r, Q(r + 1))));
        want.add_term(0, ESeries::constant(vt, ts.D, Eps(-r, make_q(r + 1, 2))));
        ok = ok && P == want;
    }
    report(2, "plus-part fixture at the initial point, orders 2..5", ok, ms_since(t0));
}

TEST_CASE("criterion 3: randomized operator-algebra properties") {
    auto t0 = Clock::now();
    bool ok = true;
    std::mt19937 rng(20240911);
    auto vt = times_table(3);
    const int cap = 3;
    const QSeries unit = QSeries::constant(vt, cap, Q(1));
    // roots: (A^{1/r})^r = A on randomized monic differential operators
    for (int r : {2, 3, 5}) {
        for (int trial = 0; trial < 50; ++trial) {
            PsDO<QSeries> A;
            A.add_term(r, unit);
            for (int i = 0; i < r; ++i) A.add_term(i, rnd_series(rng, vt, cap, 3));
            auto B = rth_root(A, r, -4, unit);
            auto P = power_floor(B, r, -4);
            ok = ok && (A - P).is_zero();
        }
    }
    // associativity of composition on random triples with negative orders
    std::uniform_int_distribution<int> ord(-2, 2);
    auto rnd_op = [&] {
        PsDO<QSeries> A(-4);
        for (int t = 0; t < 3; ++t) A.add_term(ord(rng), rnd_series(rng, vt, cap, 2));
        return A;
    };
    for (int trial = 0; trial < 100; ++trial) {
        auto A = rnd_op(), B = rnd_op(), C = rnd_op();
        auto lhs = compose(compose(A, B, -4), C, -4);
        auto rhs = compose(A, compose(B, C, -4), -4);
        int fl = std::max(lhs.floor(), rhs.floor());
        lhs.set_floor(fl);
        rhs.set_floor(fl);
        ok = ok && lhs == rhs;
    }
    // the residue of a commutator is a total x-derivative: vanishing
    // variational derivative in every field, over abstract jet coefficients
    std::uniform_int_distribution<int> jord(-2, 2);
    auto rnd_jet_op = [&] {
        PsDO<JetCoeff> A(-3);
        for (int t = 0; t < 3; ++t) A.add_term(jord(rng), rnd_jet(rng));
        return A;
    };
    for (int trial = 0; trial < 50; ++trial) {
        auto A = rnd_jet_op(), B = rnd_jet_op();
        JetCoeff res = commutator(A, B, -1).coeff(-1);
        for (int fld = 0; fld <= 1; ++fld) ok = ok && var_deriv(res, fld).is_zero();
    }
    report(3, "property suite: roots, associativity, commutator residues", ok, ms_since(t0));
}

TEST_CASE("criterion 4: hierarchy integrity and truncation stability") {
    auto t0 = Clock::now();
    bool ok = true;
    TruncationSpec ts = fixture(3).st.spec;  // r=3, N=8, D=6 (solve cross-checks
    const auto& st = fixture(3).st;          // every multiply-reachable monomial)
    // the operator does not move along the trivial directions T_{rm}
    for (int i = 0; i <= ts.r - 2; ++i) {
        ok = ok && !depends_on(st.f[static_cast<size_t>(i)], VarIndex::T(3));
        ok = ok && !depends_on(st.f[static_cast<size_t>(i)], VarIndex::T(6));
    }
    try {
        check_eps_pattern(st);
    } catch (const std::exception&) {
        ok = false;
    }
    // extra operator-order margin must not change anything
    TruncationSpec deeper = ts;
    deeper.M += 2;
    ok = ok && states_equal(st, solve_hierarchy(deeper));
    // eps-window stability: widening the clamp by one leaves the reported
    // window unchanged, and matches the unclamped solve there
    const int lo = -ts.r - ts.J, hi = ts.r + ts.J;
    auto w1 = solve_hierarchy(ts, std::make_pair(lo, hi));
    auto w2 = solve_hierarchy(ts, std::make_pair(lo - 1, hi + 1));
    ok = ok && states_equal(w1, clamp_state(w2, lo, hi));
    ok = ok && states_equal(w1, clamp_state(st, lo, hi));
    report(4, "hierarchy integrity at order three (N=8, D=6)", ok, ms_since(t0));
}

TEST_CASE("criterion 5: wave function structure") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) {
        const auto& [st, phi] = fixture(r);
        const auto& ts = st.spec;
        try {
            check_phi_genus(phi);  // no genus below zero
        } catch (const std::exception&) {
            ok = false;
        }
        // the grading operator halves the wave function
        ESeries Phi = wave_function(phi, phi.max_xdegree() + 1);
        ok = ok && (grading_apply(Phi, r) - Phi.scaled_q(make_q(1, 2))).truncated(ts.D - 1).is_zero();
        // transported to the t-frame, the genus-one stratum starts 1/2 t^0_1
        auto tvt = tvar_table(r, ts.N, false);
        CSeries g1 = phi_in_t(phi, st, 1, tvt);
        Expo e(static_cast<size_t>(tvt->size()), 0);
        e[static_cast<size_t>(tvt->require(VarIndex::tv(0, 1)))] = 1;
        ok = ok && g1.coeff(e) == Cyc(make_q(1, 2));
    }
    report(5, "wave function: genus floor, grading, dilaton constant", ok, ms_since(t0));
}

TEST_CASE("criterion 6: dilaton package including the symbol grading") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_dilaton(fixture(r).st, fixture(r).phi)) && ok;
    report(6, "dilaton equations and symbol grading, orders 2 and 3", ok, ms_since(t0));
}

TEST_CASE("criterion 7: genus-zero and genus-one flow reductions") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_gd(fixture(r).st, fixture(r).phi)) && ok;
    report(7, "flow reductions to the leading symbol, orders 2 and 3", ok, ms_since(t0));
}

TEST_CASE("criterion 8: genus-one topological recursion suite") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_trr1(fixture(r).st, fixture(r).phi)) && ok;
    report(8, "genus-one recursion in both frames plus the transported open form", ok,
           ms_since(t0));
}

TEST_CASE("criterion 9: symbol identity suite") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_symbol_identities(fixture(r).st)) && ok;
    report(9, "constituent identities, degree-one formula, membership", ok, ms_since(t0));
}

TEST_CASE("criterion 10: selection rules and falsifiability") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_dimension(fixture(r).st, fixture(r).phi)) && ok;
    report(10, "dimension bookkeeping with injected-corruption negatives", ok, ms_since(t0));
}

TEST_CASE("criterion 11: oracle agreement and rationality") {
    auto t0 = Clock::now();
    bool ok = true;
    for (int r : {2, 3}) ok = check_passes(check_r2_bridge(fixture(r).st, fixture(r).phi)) && ok;
    report(11, "closed/open oracles, boundary fixture, rationality", ok, ms_since(t0));
}
