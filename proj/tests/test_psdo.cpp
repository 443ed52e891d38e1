#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "gdh/jetpoly.hpp"
#include "gdh/psdo.hpp"

using namespace gdh;

namespace {

// L restricted to the line where all higher times vanish: dx^r + eps^{-r} r x
PsDO<ESeries> initial_line_operator(int r, VarTablePtr vt, int cap) {
    ESeries unit = ESeries::constant(vt, cap, Eps(Q(1)));
    PsDO<ESeries> L;
    L.set_term(r, unit);
    L.set_term(0, ESeries::variable(vt, cap, VarIndex::T(1), Eps(-r, Q(r))));
    return L;
}

}  // namespace

TEST_CASE("composition Leibniz rule") {
    auto vt = times_table(1);
    QSeries unit = QSeries::constant(vt, 4, Q(1));
    QSeries x = QSeries::variable(vt, 4, VarIndex::T(1));
    QSeries f = x * x;

    PsDO<QSeries> D = PsDO<QSeries>::dx_power(1, unit);
    PsDO<QSeries> F = PsDO<QSeries>::dx_power(0, f);
    PsDO<QSeries> DF = compose(D, F);
    CHECK(DF.coeff(1) == f);
    CHECK(DF.coeff(0) == dx(f));
    // dx^{-1} f = f dx^{-1} - f' dx^{-2} + f'' dx^{-3} (terminates: f'''=0)
    PsDO<QSeries> Dinv = PsDO<QSeries>::dx_power(-1, unit);
    PsDO<QSeries> G = compose(Dinv, F);
    CHECK(G.coeff(-1) == f);
    CHECK(G.coeff(-2) == -dx(f));
    CHECK(G.coeff(-3) == dx(dx(f)));
    CHECK(G.coeff(-4).is_zero());
    // dx^{-1} dx = 1
    CHECK(compose(Dinv, D, -5).coeff(0) == unit);
    CHECK(compose(Dinv, D, -5).coeff(-1).is_zero());
}

TEST_CASE("initial-line root across r") {
    for (int r : {2, 3, 4, 5}) {
        CAPTURE(r);
        auto vt = times_table(1);
        const int cap = 3;
        ESeries unit = ESeries::constant(vt, cap, Eps(Q(1)));
        auto L = initial_line_operator(r, vt, cap);
        auto B = rth_root(L, r, -r, unit);
        // dx + eps^{-r} x dx^{1-r} - ((r-1)/2) eps^{-r} dx^{-r} + higher corrections
        CHECK(B.coeff(1) == unit);
        for (int n = 0; n > 2 - r; --n) CHECK(B.coeff(n).is_zero());
        CHECK(B.coeff(1 - r) == ESeries::variable(vt, cap, VarIndex::T(1), Eps(-r, Q(1))));
        CHECK(B.coeff(-r) == ESeries::constant(vt, cap, Eps(-r, make_q(-(r - 1), 2))));
        // root^r reproduces L above the floor
        auto P = power_floor(B, r, -1);
        CHECK(P.coeff(r) == unit);
        CHECK(P.coeff(0) == L.coeff(0));
        for (int n = r - 1; n >= P.floor(); --n)
            if (n != 0) CHECK(P.coeff(n).is_zero());
    }
}

TEST_CASE("initial-line first flow operator") {
    for (int r : {2, 3, 4, 5}) {
        CAPTURE(r);
        auto vt = times_table(1);
        const int cap = 3;
        ESeries unit = ESeries::constant(vt, cap, Eps(Q(1)));
        auto L = initial_line_operator(r, vt, cap);
        auto P = power_frac(L, r + 1, r, -1, unit).plus_part();
        // dx^{r+1} + (r+1) eps^{-r} x dx + ((r+1)/2) eps^{-r}
        CHECK(P.coeff(r + 1) == unit);
        CHECK(P.coeff(1) == ESeries::variable(vt, cap, VarIndex::T(1), Eps(-r, Q(r + 1))));
        CHECK(P.coeff(0) == ESeries::constant(vt, cap, Eps(-r, make_q(r + 1, 2))));
        for (int n = r; n >= 2; --n) CHECK(P.coeff(n).is_zero());
    }
}

namespace {

QSeries rand_poly(std::mt19937& rng, VarTablePtr vt, int cap) {
    QSeries s(vt, cap);
    for (int tr = 0; tr < 4; ++tr) {
        Expo e(static_cast<size_t>(vt->size()), 0);
        for (auto& v : e) v = static_cast<uint8_t>(rng() % 2);
        if (expo_degree(e) > cap) continue;
        s.add_term(e, make_q(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3)));
    }
    return s;
}

JetCoeff rand_jet(std::mt19937& rng) {
    JetCoeff c;
    for (int tr = 0; tr < 3; ++tr) {
        JetCoeff m = JetCoeff(make_q(static_cast<long>(rng() % 7) - 3, 1));
        int nf = static_cast<int>(rng() % 3);
        for (int i = 0; i < nf; ++i) m *= JetCoeff::gen(static_cast<int>(rng() % 2), static_cast<int>(rng() % 3));
        c += m;
    }
    return c;
}

}  // namespace

TEST_CASE("random monic roots reconstruct the base") {
    std::mt19937 rng(11);
    auto vt = times_table(2);
    const int cap = 3;
    QSeries unit = QSeries::constant(vt, cap, Q(1));
    for (int r : {2, 3, 5}) {
        for (int it = 0; it < 10; ++it) {
            PsDO<QSeries> A;
            A.set_term(r, unit);
            for (int n = r - 2; n >= 0; --n) A.set_term(n, rand_poly(rng, vt, cap));
            auto B = rth_root(A, r, -4, unit);
            auto P = power_floor(B, r, -4);
            for (int n = r; n >= -4; --n) {
                CAPTURE(r);
                CAPTURE(n);
                CHECK(P.coeff(n) == A.coeff(n));
            }
        }
    }
}

TEST_CASE("composition is associative") {
    std::mt19937 rng(23);
    auto vt = times_table(2);
    const int cap = 3;
    for (int it = 0; it < 25; ++it) {
        PsDO<QSeries> A, B, C;
        for (int n = -2; n <= 2; ++n) {
            A.set_term(n, rand_poly(rng, vt, cap));
            B.set_term(n, rand_poly(rng, vt, cap));
            C.set_term(n, rand_poly(rng, vt, cap));
        }
        const int fl = -5;
        auto L = compose(compose(A, B, fl), C, fl);
        auto R = compose(A, compose(B, C, fl), fl);
        for (int n = std::max(L.floor(), R.floor()); n <= 6; ++n) {
            CAPTURE(n);
            CHECK(L.coeff(n) == R.coeff(n));
        }
    }
}

TEST_CASE("residue of a commutator is a total x-derivative") {
    std::mt19937 rng(31);
    for (int it = 0; it < 15; ++it) {
        PsDO<JetCoeff> A, B;
        for (int n = -2; n <= 2; ++n) {
            A.set_term(n, rand_jet(rng));
            B.set_term(n, rand_jet(rng));
        }
        JetCoeff res = commutator(A, B, -1).residue();
        CHECK(gdh::is_zero(res.constant_part()));
        CHECK(var_deriv(res, 0).is_zero());
        CHECK(var_deriv(res, 1).is_zero());
    }
}

TEST_CASE("order-two flow commutator in jet variables") {
    // L = dx^2 + u: [(L^{3/2})_+, L] = (1/4) u_xxx + (3/2) u u_x, a pure
    // multiplication operator
    JetCoeff unit = JetCoeff::one();
    PsDO<JetCoeff> L;
    L.set_term(2, unit);
    L.set_term(0, JetCoeff::gen(0, 0));
    auto P = power_frac(L, 3, 2, -3, unit).plus_part();
    auto C = commutator(P, L, -3);
    JetCoeff expect = JetCoeff::gen(0, 3) * make_q(1, 4) +
                      JetCoeff::gen(0, 0) * JetCoeff::gen(0, 1) * make_q(3, 2);
    CHECK(C.coeff(0) == expect);
    CHECK(C.plus_part() == PsDO<JetCoeff>::dx_power(0, expect));
    for (int n = -1; n >= -3; --n) CHECK(C.coeff(n).is_zero());
}

TEST_CASE("apply differential operator") {
    auto vt = times_table(1);
    QSeries unit = QSeries::constant(vt, 4, Q(1));
    QSeries x = QSeries::variable(vt, 4, VarIndex::T(1));
    PsDO<QSeries> A;  // dx^2 + x dx
    A.set_term(2, unit);
    A.set_term(1, x);
    QSeries f = x * x * x;
    CHECK(apply_diffop(A, f) == x.scaled_q(Q(6)) + x * x * x.scaled_q(Q(3)));
}

TEST_CASE("symbol round trip and fractional symbol power") {
    auto vt = times_table(1);
    const int cap = 3;
    ESeries unit = ESeries::constant(vt, cap, Eps(Q(1)));
    auto L = initial_line_operator(2, vt, cap);
    auto z = L.symbol();
    CHECK(PsDO<ESeries>::from_symbol(z) == L);
    // commutative square root of the symbol squares back
    auto s = frac_pow(z, 1, 2, -4, unit);
    auto back = s * s;
    CHECK(back.coeff(2) == unit);
    CHECK(back.coeff(0) == L.coeff(0));
    for (int n = -1; n >= back.floor(); --n) CHECK(back.coeff(n).is_zero());
}
