#include "gdh/solver.hpp"

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace gdh {

void TruncationSpec::validate() const {
    if (r < 2) throw std::invalid_argument("spec: r must be >= 2");
    if (N < r + 1) throw std::invalid_argument("spec: need N >= r+1 to reach the first nontrivial flow");
    if (D < 3) throw std::invalid_argument("spec: need degree D >= 3");
    if (G < 0) throw std::invalid_argument("spec: genus cap must be >= 0");
    if (M < 0) throw std::invalid_argument("spec: depth margin must be >= 0");
    if (J < 2) throw std::invalid_argument("spec: eps window half-width must be >= 2");
}

std::string expo_label(const Expo& e, const VarTable& vt) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (!s.empty()) s += " ";
        s += vt.vars[i].label();
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

PsDO<ESeries> HierarchyState::lax() const {
    PsDO<ESeries> L;
    L.set_term(spec.r, unit());
    for (int i = 0; i <= spec.r - 2; ++i) L.set_term(i, f[static_cast<size_t>(i)]);
    return L;
}

QSeries HierarchyState::stratum(int i, int j) const {
    return eps_coeff(f[static_cast<size_t>(i)], i - spec.r + j);
}

PsDO<QSeries> HierarchyState::lax_stratum(int j) const {
    PsDO<QSeries> L;
    if (j == 0) L.set_term(spec.r, QSeries::constant(vt, spec.D, Q(1)));
    for (int i = 0; i <= spec.r - 2; ++i) L.set_term(i, stratum(i, j));
    return L;
}

PsDO<ESeries> initial_operator(const TruncationSpec& ts, VarTablePtr vt) {
    PsDO<ESeries> L;
    L.set_term(ts.r, ESeries::constant(vt, ts.D, Eps(Q(1))));
    L.set_term(0, ESeries::variable(vt, ts.D, VarIndex::T(1), Eps(-ts.r, Q(ts.r))));
    return L;
}

std::vector<PsDO<ESeries>> flow_plus_parts(const PsDO<ESeries>& L, const TruncationSpec& ts,
                                           const ESeries& unit) {
    // floor 1-N makes the plus part of L^{N/r} exact; M adds margin that the
    // stability criterion asserts is irrelevant
    int fl = 1 - ts.N - ts.M;
    auto root = rth_root(L, ts.r, fl, unit);
    std::vector<PsDO<ESeries>> out;
    out.reserve(static_cast<size_t>(ts.N));
    PsDO<ESeries> P = root;
    out.push_back(P.plus_part());
    for (int n = 2; n <= ts.N; ++n) {
        P = compose(P, root);
        out.push_back(P.plus_part());
    }
    return out;
}

PsDO<ESeries> flow_rhs(const PsDO<ESeries>& L, const PsDO<ESeries>& plus_part, int n, int r) {
    auto C = commutator(plus_part, L);
    if (!C.is_zero() && (C.top() > r - 2 || C.low() < 0))
        throw std::runtime_error("hierarchy: flow " + std::to_string(n) +
                                 " commutator has orders outside [0, r-2]");
    return C.map_coeffs<ESeries>(
        [n](const ESeries& s) { return s.map_coeffs<Eps>([n](const Eps& e) { return e.shifted(n - 1); }); });
}

namespace {

int env_threads() {
    if (const char* v = std::getenv("GDH_THREADS")) {
        int t = std::atoi(v);
        if (t > 1) return t;
    }
    return 1;
}

void parallel_for(int lo, int hi, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || hi - lo <= 1) {
        for (int n = lo; n < hi; ++n) fn(n);
        return;
    }
    std::atomic<int> next{lo};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            int n = next.fetch_add(1);
            if (n >= hi) return;
            try {
                fn(n);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int nt = std::min(threads, hi - lo);
    pool.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

HierarchyState solve_hierarchy(const TruncationSpec& ts, std::optional<std::pair<int, int>> eps_window) {
    ts.validate();
    auto vt = times_table(ts.N);
    HierarchyState st{ts, vt, std::vector<ESeries>(static_cast<size_t>(ts.r - 1), ESeries(vt, ts.D))};
    st.f[0] = ESeries::variable(vt, ts.D, VarIndex::T(1), Eps(-ts.r, Q(ts.r)));
    const ESeries unit = st.unit();
    const ESeries zero(vt, ts.D);
    const int threads = env_threads();

    for (int layer = 0; layer < ts.D; ++layer) {
        auto L = st.lax();
        auto plus = flow_plus_parts(L, ts, unit);
        // rhs[n][i] = coefficient of dx^i in eps^{n-1} [(L^{n/r})_+, L],
        // exact at weighted degree `layer` since only layers <= layer feed it
        std::vector<std::vector<ESeries>> rhs(static_cast<size_t>(ts.N + 1));
        parallel_for(2, ts.N + 1, threads, [&](int n) {
            auto R = flow_rhs(L, plus[static_cast<size_t>(n - 1)], n, ts.r);
            std::vector<ESeries> row(static_cast<size_t>(ts.r - 1), zero);
            for (int i = 0; i <= ts.r - 2; ++i) {
                ESeries c = R.coeff(i);
                if (c.table()) row[static_cast<size_t>(i)] = std::move(c);
            }
            rhs[static_cast<size_t>(n)] = std::move(row);
        });

        for (int i = 0; i <= ts.r - 2; ++i) {
            std::vector<ESeries> col(static_cast<size_t>(ts.N + 1));
            for (int n = 2; n <= ts.N; ++n)
                col[static_cast<size_t>(n)] = rhs[static_cast<size_t>(n)][static_cast<size_t>(i)];
            integrate_layer(st.f[static_cast<size_t>(i)], col, layer, ts.N, "f_" + std::to_string(i));
        }

        if (eps_window) {
            auto [lo, hi] = *eps_window;
            for (auto& fi : st.f)
                fi = fi.map_coeffs<Eps>([lo, hi](const Eps& e) { return e.clamped(lo, hi); });
        }
    }

    check_eps_pattern(st);
    return st;
}

void integrate_layer(ESeries& x, const std::vector<ESeries>& rhs, int layer, int N,
                     const std::string& what) {
    const auto& vt = x.table();
    // every flow that can produce a next-layer monomial proposes it...
    std::set<Expo> cands;
    for (int n = 2; n <= N; ++n) {
        const auto& r = rhs[static_cast<size_t>(n)];
        if (!r.table()) continue;
        for (const auto& [beta, c] : r.terms()) {
            if (x.wdeg(beta) != layer) continue;
            Expo alpha = beta;
            ++alpha[static_cast<size_t>(n - 1)];
            cands.insert(std::move(alpha));
        }
    }
    // ...and all flows that touch it must agree on its value
    for (const auto& alpha : cands) {
        std::optional<Eps> val;
        int src = 0;
        for (int n = 2; n <= N; ++n) {
            int an = alpha[static_cast<size_t>(n - 1)];
            if (an == 0) continue;
            Expo beta = alpha;
            --beta[static_cast<size_t>(n - 1)];
            const auto& r = rhs[static_cast<size_t>(n)];
            Eps v = (r.table() ? r.coeff(beta) : Eps()) * make_q(1, an);
            if (!val) {
                val = std::move(v);
                src = n;
            } else if (!(v == *val)) {
                throw std::runtime_error("hierarchy: flows T" + std::to_string(src) + " and T" +
                                         std::to_string(n) + " disagree on " + what + " at " +
                                         expo_label(alpha, *vt));
            }
        }
        if (val && !val->is_zero()) x.set_term(alpha, *val);
    }
}

void check_eps_pattern(const HierarchyState& st) {
    for (int i = 0; i <= st.spec.r - 2; ++i) {
        for (const auto& [e, c] : st.f[static_cast<size_t>(i)].terms()) {
            if (c.is_zero()) continue;
            if (c.lowest() < i - st.spec.r)
                throw std::runtime_error("hierarchy: f_" + std::to_string(i) + " at " +
                                         expo_label(e, *st.vt) + " has eps exponent " +
                                         std::to_string(c.lowest()) + " below " +
                                         std::to_string(i - st.spec.r));
        }
    }
}

}  // namespace gdh
