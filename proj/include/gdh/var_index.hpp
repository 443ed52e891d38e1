#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace gdh {

// A formal variable: a hierarchy time T_n (n >= 1), an intersection-theory
// variable t^alpha_d (0 <= alpha <= r-1, d >= 0), or the boundary variable s.
// x is identified with T_1.
struct VarIndex {
    enum class Kind : std::uint8_t { T = 0, t = 1, s = 2 };

    Kind kind = Kind::T;
    int n = 0;      // T-index
    int alpha = 0;  // twist, for t-kind
    int d = 0;      // descendent, for t-kind

    static VarIndex T(int n) {
        if (n < 1) throw std::invalid_argument("VarIndex: T_n needs n >= 1");
        VarIndex v;
        v.kind = Kind::T;
        v.n = n;
        return v;
    }
    static VarIndex tv(int alpha, int d) {
        if (alpha < 0 || d < 0) throw std::invalid_argument("VarIndex: bad t^alpha_d");
        VarIndex v;
        v.kind = Kind::t;
        v.alpha = alpha;
        v.d = d;
        return v;
    }
    static VarIndex s() {
        VarIndex v;
        v.kind = Kind::s;
        return v;
    }

    std::string label() const {
        switch (kind) {
            case Kind::T: return "T" + std::to_string(n);
            case Kind::t: return "t[" + std::to_string(alpha) + "," + std::to_string(d) + "]";
            case Kind::s: return "s";
        }
        return "?";
    }

    // Degree weight used by the truncation grading. The x-like variables
    // (T_1 and its dictionary image t^0_0) carry weight 0: the solutions of
    // interest are polynomial in them at each weighted-degree layer, and a
    // weight-0 grading commutes exactly with d/dx, which a total-degree cap
    // would not. The boundary variable s enters through a shift of t^{r-1}_0
    // and inherits its weight 1, so the shift is exact under the cap.
    int weight() const {
        if (kind == Kind::T) return n == 1 ? 0 : 1;
        if (kind == Kind::t) return (alpha == 0 && d == 0) ? 0 : 1;
        return 1;  // s
    }

    friend bool operator==(const VarIndex& a, const VarIndex& b) {
        return std::tie(a.kind, a.n, a.alpha, a.d) == std::tie(b.kind, b.n, b.alpha, b.d);
    }
    friend bool operator<(const VarIndex& a, const VarIndex& b) {
        return std::tie(a.kind, a.n, a.alpha, a.d) < std::tie(b.kind, b.n, b.alpha, b.d);
    }
};

struct VarTable {
    std::vector<VarIndex> vars;

    int size() const { return static_cast<int>(vars.size()); }
    int index_of(const VarIndex& v) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == v) return static_cast<int>(i);
        return -1;
    }
    int require(const VarIndex& v) const {
        int i = index_of(v);
        if (i < 0) throw std::out_of_range("VarTable: unknown variable " + v.label());
        return i;
    }
    friend bool operator==(const VarTable& a, const VarTable& b) { return a.vars == b.vars; }
};

using VarTablePtr = std::shared_ptr<const VarTable>;

// T_1, ..., T_N
inline VarTablePtr times_table(int N) {
    auto t = std::make_shared<VarTable>();
    for (int n = 1; n <= N; ++n) t->vars.push_back(VarIndex::T(n));
    return t;
}

inline bool same_table(const VarTablePtr& a, const VarTablePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace gdh
