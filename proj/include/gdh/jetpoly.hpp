#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "gdh/tseries.hpp"

namespace gdh {

// Monomial in the abstract jet generators u[fld][k] (k-th x-derivative of the
// field tagged fld). Entries {fld, k, e} with e > 0, sorted by (fld, k).
struct JetMono {
    std::vector<std::array<int, 3>> g;

    int diff_degree() const {
        int s = 0;
        for (const auto& a : g) s += a[1] * a[2];
        return s;
    }
    int total_degree() const {
        int s = 0;
        for (const auto& a : g) s += a[2];
        return s;
    }
    friend bool operator<(const JetMono& a, const JetMono& b) { return a.g < b.g; }
    friend bool operator==(const JetMono& a, const JetMono& b) { return a.g == b.g; }
};

// Polynomial over Q in the jet generators. The x-derivative acts as the
// derivation u[fld][k] -> u[fld][k+1].
class JetCoeff {
public:
    JetCoeff() = default;
    explicit JetCoeff(const Q& q) {
        if (!gdh::is_zero(q)) t_[JetMono{}] = q;
    }
    static JetCoeff one() { return JetCoeff(Q(1)); }
    static JetCoeff gen(int fld, int k, const Q& scale = Q(1)) {
        JetCoeff x;
        if (!gdh::is_zero(scale)) t_of(x)[JetMono{{{fld, k, 1}}}] = scale;
        return x;
    }

    bool is_zero() const { return t_.empty(); }
    const std::map<JetMono, Q>& terms() const { return t_; }
    Q coeff(const JetMono& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Q(0) : it->second;
    }
    Q constant_part() const { return coeff(JetMono{}); }

    void add_term(const JetMono& m, const Q& q) {
        if (gdh::is_zero(q)) return;
        auto [it, fresh] = t_.try_emplace(m, q);
        if (!fresh) {
            it->second += q;
            if (gdh::is_zero(it->second)) t_.erase(it);
        }
    }

    JetCoeff& operator+=(const JetCoeff& o) {
        for (const auto& [m, q] : o.t_) add_term(m, q);
        return *this;
    }
    JetCoeff& operator-=(const JetCoeff& o) {
        for (const auto& [m, q] : o.t_) add_term(m, -q);
        return *this;
    }
    JetCoeff operator-() const {
        JetCoeff x;
        for (const auto& [m, q] : t_) x.t_[m] = -q;
        return x;
    }
    friend JetCoeff operator+(JetCoeff a, const JetCoeff& b) { return a += b; }
    friend JetCoeff operator-(JetCoeff a, const JetCoeff& b) { return a -= b; }

    friend JetCoeff operator*(const JetCoeff& a, const JetCoeff& b) {
        JetCoeff x;
        for (const auto& [m, q] : a.t_)
            for (const auto& [m2, q2] : b.t_) x.add_term(mono_mul(m, m2), q * q2);
        return x;
    }
    JetCoeff& operator*=(const JetCoeff& o) { return *this = *this * o; }
    JetCoeff& operator*=(const Q& q) {
        if (gdh::is_zero(q)) {
            t_.clear();
            return *this;
        }
        for (auto& [m, c] : t_) c *= q;
        return *this;
    }
    friend JetCoeff operator*(JetCoeff a, const Q& q) { return a *= q; }
    friend bool operator==(const JetCoeff& a, const JetCoeff& b) { return a.t_ == b.t_; }

    // the derivation u[fld][k] -> u[fld][k+1] (Leibniz)
    JetCoeff dx() const {
        JetCoeff x;
        for (const auto& [m, q] : t_) {
            for (size_t i = 0; i < m.g.size(); ++i) {
                JetMono m2 = m;
                int e = m2.g[i][2];
                if (e == 1)
                    m2.g.erase(m2.g.begin() + static_cast<long>(i));
                else
                    m2.g[i][2] = e - 1;
                x.add_term(mono_mul(m2, JetMono{{{m.g[i][0], m.g[i][1] + 1, 1}}}), q * Q(e));
            }
        }
        return x;
    }

    // part of given differential degree (sum of k * multiplicity)
    JetCoeff diff_part(int deg) const {
        JetCoeff x;
        for (const auto& [m, q] : t_)
            if (m.diff_degree() == deg) x.t_[m] = q;
        return x;
    }
    int max_diff_degree() const {
        int d = 0;
        for (const auto& [m, q] : t_) d = std::max(d, m.diff_degree());
        return d;
    }

    // partial derivative by the generator u[fld][k]
    JetCoeff deriv(int fld, int k) const {
        JetCoeff x;
        for (const auto& [m, q] : t_) {
            for (size_t i = 0; i < m.g.size(); ++i) {
                if (m.g[i][0] != fld || m.g[i][1] != k) continue;
                JetMono m2 = m;
                int e = m2.g[i][2];
                if (e == 1)
                    m2.g.erase(m2.g.begin() + static_cast<long>(i));
                else
                    m2.g[i][2] = e - 1;
                x.add_term(m2, q * Q(e));
            }
        }
        return x;
    }
    int max_k(int fld) const {
        int k = -1;
        for (const auto& [m, q] : t_)
            for (const auto& a : m.g)
                if (a[0] == fld) k = std::max(k, a[1]);
        return k;
    }

private:
    static std::map<JetMono, Q>& t_of(JetCoeff& x) { return x.t_; }
    static JetMono mono_mul(const JetMono& a, const JetMono& b) {
        JetMono m;
        size_t i = 0, j = 0;
        while (i < a.g.size() || j < b.g.size()) {
            if (j == b.g.size() || (i < a.g.size() && (a.g[i][0] < b.g[j][0] ||
                                                       (a.g[i][0] == b.g[j][0] && a.g[i][1] < b.g[j][1])))) {
                m.g.push_back(a.g[i++]);
            } else if (i == a.g.size() || b.g[j][0] < a.g[i][0] ||
                       (b.g[j][0] == a.g[i][0] && b.g[j][1] < a.g[i][1])) {
                m.g.push_back(b.g[j++]);
            } else {
                m.g.push_back({a.g[i][0], a.g[i][1], a.g[i][2] + b.g[j][2]});
                ++i;
                ++j;
            }
        }
        return m;
    }

    std::map<JetMono, Q> t_;
};

inline bool is_zero(const JetCoeff& c) { return c.is_zero(); }
inline bool is_one(const JetCoeff& c) { return c == JetCoeff::one(); }
inline JetCoeff dx(const JetCoeff& c) { return c.dx(); }

// Variational derivative sum_k (-d/dx)^k (dh/du[fld][k]). A total
// x-derivative has vanishing variational derivative in every field.
inline JetCoeff var_deriv(const JetCoeff& h, int fld) {
    JetCoeff out;
    int kmax = h.max_k(fld);
    for (int k = 0; k <= kmax; ++k) {
        JetCoeff d = h.deriv(fld, k);
        for (int i = 0; i < k; ++i) d = -d.dx();
        out += d;
    }
    return out;
}

// Evaluate a jet polynomial: gen_value(fld, k) supplies the image of
// u[fld][k] as a series.
template <class C, class F>
TSeries<C> jet_subst(const JetCoeff& h, F&& gen_value, VarTablePtr vt, int cap) {
    TSeries<C> out(vt, cap);
    for (const auto& [m, q] : h.terms()) {
        TSeries<C> term = TSeries<C>::constant(vt, cap, from_q<C>(q));
        for (const auto& a : m.g)
            for (int e = 0; e < a[2]; ++e) term *= gen_value(a[0], a[1]);
        out += term;
    }
    return out;
}

}  // namespace gdh
