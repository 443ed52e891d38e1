#pragma once

#include <map>
#include <stdexcept>

#include "gdh/rational.hpp"

namespace gdh {

// Laurent polynomial in the formal parameter eps with rational coefficients.
// Sparse; absent exponents are zero. All arithmetic is exact -- no window is
// imposed here, callers clamp explicitly when they want to probe stability.
class Eps {
public:
    Eps() = default;
    explicit Eps(const Q& q) {
        if (!gdh::is_zero(q)) c_[0] = q;
    }
    Eps(int power, const Q& q) {
        if (!gdh::is_zero(q)) c_[power] = q;
    }

    bool is_zero() const { return c_.empty(); }
    const std::map<int, Q>& terms() const { return c_; }
    Q coeff(int power) const {
        auto it = c_.find(power);
        return it == c_.end() ? Q(0) : it->second;
    }
    int lowest() const {
        if (c_.empty()) throw std::domain_error("Eps: lowest() of zero");
        return c_.begin()->first;
    }
    int highest() const {
        if (c_.empty()) throw std::domain_error("Eps: highest() of zero");
        return c_.rbegin()->first;
    }

    Eps& operator+=(const Eps& o) {
        for (const auto& [p, q] : o.c_) add_term(p, q);
        return *this;
    }
    Eps& operator-=(const Eps& o) {
        for (const auto& [p, q] : o.c_) add_term(p, -q);
        return *this;
    }
    Eps operator-() const {
        Eps x;
        for (const auto& [p, q] : c_) x.c_[p] = -q;
        return x;
    }
    friend Eps operator+(Eps a, const Eps& b) { return a += b; }
    friend Eps operator-(Eps a, const Eps& b) { return a -= b; }
    friend Eps operator*(const Eps& a, const Eps& b) {
        Eps x;
        for (const auto& [p, q] : a.c_)
            for (const auto& [p2, q2] : b.c_) x.add_term(p + p2, q * q2);
        return x;
    }
    Eps& operator*=(const Eps& o) { return *this = *this * o; }
    friend Eps operator*(const Eps& a, const Q& q) {
        Eps x;
        if (gdh::is_zero(q)) return x;
        for (const auto& [p, c] : a.c_) x.c_[p] = c * q;
        return x;
    }
    Eps& operator*=(const Q& q) { return *this = *this * q; }
    friend bool operator==(const Eps& a, const Eps& b) { return a.c_ == b.c_; }

    // multiply by eps^k
    Eps shifted(int k) const {
        Eps x;
        for (const auto& [p, q] : c_) x.c_[p + k] = q;
        return x;
    }
    // eps d/d eps
    Eps eps_scaled() const {
        Eps x;
        for (const auto& [p, q] : c_)
            if (p != 0) x.c_[p] = Q(p) * q;
        return x;
    }
    // drop exponents outside [lo, hi]
    Eps clamped(int lo, int hi) const {
        Eps x;
        for (const auto& [p, q] : c_)
            if (p >= lo && p <= hi) x.c_[p] = q;
        return x;
    }

    void add_term(int power, const Q& q) {
        if (gdh::is_zero(q)) return;
        auto [it, fresh] = c_.try_emplace(power, q);
        if (!fresh) {
            it->second += q;
            if (gdh::is_zero(it->second)) c_.erase(it);
        }
    }

private:
    std::map<int, Q> c_;
};

inline bool is_zero(const Eps& e) { return e.is_zero(); }
inline bool is_one(const Eps& e) { return e == Eps(Q(1)); }

}  // namespace gdh
