#include "gdh/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace gdh {
namespace {

// Walk the sub-multisets of a sorted multiset; `mult` counts the labeled
// splits realizing each (in, out) pair.
template <class T, class Fn>
void for_each_split(const std::vector<T>& ms, Fn&& fn) {
    std::vector<std::pair<T, int>> runs;
    for (const auto& x : ms) {
        if (!runs.empty() && runs.back().first == x)
            ++runs.back().second;
        else
            runs.push_back({x, 1});
    }
    std::vector<int> take(runs.size(), 0);
    std::function<void(size_t, Q)> rec = [&](size_t i, Q mult) {
        if (i == runs.size()) {
            std::vector<T> in, out;
            for (size_t j = 0; j < runs.size(); ++j) {
                for (int c = 0; c < take[j]; ++c) in.push_back(runs[j].first);
                for (int c = take[j]; c < runs[j].second; ++c) out.push_back(runs[j].first);
            }
            fn(in, out, mult);
            return;
        }
        for (int c = 0; c <= runs[i].second; ++c) {
            take[i] = c;
            rec(i + 1, mult * falling_binom(runs[i].second, c));
        }
    };
    rec(0, Q(1));
}

// Exact solve of an (overdetermined) linear system; true iff the solution
// exists and is unique.
bool solve_unique(std::vector<std::vector<Q>> A, std::vector<Q> b, std::vector<Q>& x) {
    const size_t m = A.size();
    const size_t n = m ? A[0].size() : 0;
    size_t row = 0;
    std::vector<size_t> pivot_of(n, SIZE_MAX);
    for (size_t col = 0; col < n && row < m; ++col) {
        size_t p = row;
        while (p < m && gdh::is_zero(A[p][col])) ++p;
        if (p == m) continue;
        std::swap(A[p], A[row]);
        std::swap(b[p], b[row]);
        Q inv = Q(1) / A[row][col];
        for (size_t j = col; j < n; ++j) A[row][j] *= inv;
        b[row] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == row || gdh::is_zero(A[i][col])) continue;
            Q f = A[i][col];
            for (size_t j = col; j < n; ++j) A[i][j] -= f * A[row][j];
            b[i] -= f * b[row];
        }
        pivot_of[col] = row++;
    }
    for (size_t i = row; i < m; ++i)
        if (!gdh::is_zero(b[i])) return false;  // inconsistent
    x.assign(n, Q(0));
    for (size_t col = 0; col < n; ++col) {
        if (pivot_of[col] == SIZE_MAX) return false;  // underdetermined
        x[col] = b[pivot_of[col]];
    }
    return true;
}

std::vector<std::vector<Q>> invert_matrix(const std::vector<std::vector<Q>>& M) {
    const size_t n = M.size();
    std::vector<std::vector<Q>> out(n);
    for (size_t c = 0; c < n; ++c) {
        std::vector<Q> e(n, Q(0)), x;
        e[c] = Q(1);
        if (!solve_unique(M, e, x)) throw std::runtime_error("oracle: pairing matrix is singular");
        out[c] = std::move(x);
    }
    // out holds columns; transpose into rows
    std::vector<std::vector<Q>> inv(n, std::vector<Q>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = out[j][i];
    return inv;
}

}  // namespace

ClosedOracle::ClosedOracle(ClosedPotential& F) : r_(F.state().spec.r), F_(F) {
    const int m = r_ - 1;
    eta_.assign(static_cast<size_t>(m), std::vector<Q>(static_cast<size_t>(m), Q(0)));
    for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu)
            eta_[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
                F_.correlator(0, {{0, 0}, {mu, 0}, {nu, 0}}).rational_part();
    eta_inv_ = invert_matrix(eta_);
}

Q ClosedOracle::primary(std::vector<int> alphas) {
    if (alphas.size() < 3) return Q(0);
    std::sort(alphas.begin(), alphas.end());
    if (auto it = primaries_.find(alphas); it != primaries_.end()) return it->second;
    // the descendent-free slice is the seed data
    std::vector<std::pair<int, int>> ins;
    ins.reserve(alphas.size());
    for (int a : alphas) ins.push_back({a, 0});
    Q v = F_.correlator(0, ins).rational_part();
    primaries_[std::move(alphas)] = v;
    return v;
}

Q ClosedOracle::value(std::vector<std::pair<int, int>> ins) {
    for (auto [a, d] : ins)
        if (a < 0 || a > r_ - 2 || d < 0)
            throw std::invalid_argument("closed oracle: insertion outside the reduced range");
    if (ins.size() <= 2) return Q(0);
    std::sort(ins.begin(), ins.end(), [](const auto& x, const auto& y) {
        return std::tie(x.second, x.first) < std::tie(y.second, y.first);
    });
    if (auto it = memo_.find(ins); it != memo_.end()) return it->second;
    Q out(0);
    if (ins.back().second == 0) {
        std::vector<int> al;
        al.reserve(ins.size());
        for (auto [a, d] : ins) al.push_back(a);
        out = primary(std::move(al));
    } else {
        // genus-0 topological recursion on the deepest insertion
        auto A = ins.back();
        std::vector<std::pair<int, int>> head(ins.begin(), ins.end() - 1);
        auto B = head[0];
        auto C = head[1];
        std::vector<std::pair<int, int>> S(head.begin() + 2, head.end());
        const int m = r_ - 1;
        for_each_split(S, [&](const std::vector<std::pair<int, int>>& S1,
                              const std::vector<std::pair<int, int>>& S2, const Q& mult) {
            for (int mu = 0; mu < m; ++mu) {
                std::vector<std::pair<int, int>> left = S1;
                left.push_back({A.first, A.second - 1});
                left.push_back({mu, 0});
                Q lv = value(std::move(left));
                if (gdh::is_zero(lv)) continue;
                for (int nu = 0; nu < m; ++nu) {
                    const Q& w = eta_inv_[static_cast<size_t>(mu)][static_cast<size_t>(nu)];
                    if (gdh::is_zero(w)) continue;
                    std::vector<std::pair<int, int>> right = S2;
                    right.push_back({nu, 0});
                    right.push_back(B);
                    right.push_back(C);
                    Q rv = value(std::move(right));
                    if (gdh::is_zero(rv)) continue;
                    out += mult * w * lv * rv;
                }
            }
        });
    }
    memo_[ins] = out;
    return out;
}

OpenOracleR2::OpenOracleR2(ClosedPotential& F) : F_(F) {
    if (F.state().spec.r != 2)
        throw std::invalid_argument("open oracle: an order-two hierarchy state is required");
}

Q OpenOracleR2::closed0(std::vector<int> ds) {
    long sum = std::accumulate(ds.begin(), ds.end(), 0L);
    if (sum != static_cast<long>(ds.size()) - 3) return Q(0);
    std::vector<std::pair<int, int>> ins;
    ins.reserve(ds.size());
    for (int d : ds) ins.push_back({0, d});
    return F_.correlator(0, ins).rational_part();
}

Q OpenOracleR2::value(std::vector<int> ds, int k) {
    if (k < 0) return Q(0);
    for (int d : ds)
        if (d < 0) throw std::invalid_argument("open oracle: bad descendent");
    std::sort(ds.begin(), ds.end());
    long sd = std::accumulate(ds.begin(), ds.end(), 0L);
    if (2 * sd != k + 2 * static_cast<long>(ds.size()) - 3) return Q(0);
    auto key = std::make_pair(ds, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Q out(0);
    if (ds.empty()) {
        out = k == 3 ? Q(1) : Q(0);  // disk seed
    } else if (ds.back() == 0) {
        // string equation: only the boundary term survives on primaries
        out = ds.size() == 1 && k == 1 ? Q(1) : Q(0);
    } else {
        // genus-0 reduction of the deepest insertion:
        //   (2n+1)/2 dF/dt_n = 1/2 d^2F^c/dt_{n-1}dt_0 dF/dt_0 + dF/ds dF/dt_{n-1}
        const int n = ds.back();
        std::vector<int> rest(ds.begin(), ds.end() - 1);
        Q acc(0);
        for_each_split(rest, [&](const std::vector<int>& Y, const std::vector<int>& Z,
                                 const Q& mult) {
            std::vector<int> cy = Y;
            cy.push_back(n - 1);
            cy.push_back(0);
            Q cv = closed0(std::move(cy));
            if (!gdh::is_zero(cv)) {
                std::vector<int> oz = Z;
                oz.push_back(0);
                acc += mult * cv * value(std::move(oz), k) / 2;
            }
            for (int k1 = 0; k1 <= k; ++k1) {
                Q lv = value(Y, k1 + 1);
                if (gdh::is_zero(lv)) continue;
                std::vector<int> oz = Z;
                oz.push_back(n - 1);
                Q rv = value(std::move(oz), k - k1);
                if (!gdh::is_zero(rv)) acc += mult * falling_binom(k, k1) * lv * rv;
            }
        });
        out = acc * Q(2) / Q(2 * n + 1);
    }
    memo_[key] = out;
    return out;
}

Q r2_bridge(const Q& classical, int g, int k) {
    if ((g + k) % 2 == 0)
        throw std::invalid_argument("order-two bridge: the classical number must vanish at even g+k");
    return classical * q_pow(Q(-2), (g + k - 1) / 2);
}

}  // namespace gdh
