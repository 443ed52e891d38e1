#pragma once

#include <limits>
#include <map>
#include <stdexcept>

#include "gdh/rational.hpp"

namespace gdh {

// Orders below kExactFloor are impossible; it doubles as "no truncation".
constexpr int kExactFloor = std::numeric_limits<int>::min() / 4;

// Laurent series in the symbol variable z with coefficients in a commutative
// ring R, truncated below at `floor` (coefficients of z^n with n < floor are
// unknown and dropped). Multiplication is the plain commutative one.
template <class R>
class ZSeries {
public:
    explicit ZSeries(int floor = kExactFloor) : floor_(floor) {}

    int floor() const { return floor_; }
    void set_floor(int f) {
        floor_ = f;
        prune();
    }
    bool is_zero() const { return c_.empty(); }
    const std::map<int, R>& terms() const { return c_; }
    int top() const {
        if (c_.empty()) throw std::domain_error("ZSeries: top() of zero");
        return c_.rbegin()->first;
    }
    R coeff(int n) const {
        auto it = c_.find(n);
        return it == c_.end() ? R() : it->second;
    }

    void add_term(int n, const R& v) {
        if (n < floor_ || gdh::is_zero(v)) return;
        auto [it, fresh] = c_.try_emplace(n, v);
        if (!fresh) {
            it->second += v;
            if (gdh::is_zero(it->second)) c_.erase(it);
        }
    }
    void set_term(int n, R v) {
        if (n < floor_) return;
        if (gdh::is_zero(v))
            c_.erase(n);
        else
            c_[n] = std::move(v);
    }

    ZSeries& operator+=(const ZSeries& o) {
        floor_ = std::max(floor_, o.floor_);
        prune();
        for (const auto& [n, v] : o.c_) add_term(n, v);
        return *this;
    }
    ZSeries& operator-=(const ZSeries& o) {
        floor_ = std::max(floor_, o.floor_);
        prune();
        for (const auto& [n, v] : o.c_) {
            R neg = v;
            neg *= Q(-1);
            add_term(n, neg);
        }
        return *this;
    }
    friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
    friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a -= b; }

    friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
        int fl = kExactFloor;
        if (a.floor_ != kExactFloor) fl = std::max(fl, a.floor_ + (b.c_.empty() ? 0 : b.top()));
        if (b.floor_ != kExactFloor) fl = std::max(fl, b.floor_ + (a.c_.empty() ? 0 : a.top()));
        ZSeries x(fl);
        for (const auto& [n, v] : a.c_)
            for (const auto& [m, w] : b.c_) {
                if (n + m < fl) continue;
                x.add_term(n + m, v * w);
            }
        return x;
    }
    ZSeries& operator*=(const ZSeries& o) { return *this = *this * o; }

    ZSeries scaled_q(const Q& q) const {
        ZSeries x(floor_);
        if (gdh::is_zero(q)) return x;
        for (const auto& [n, v] : c_) {
            R w = v;
            w *= q;
            if (!gdh::is_zero(w)) x.c_[n] = std::move(w);
        }
        return x;
    }
    ZSeries scaled(const R& r) const {
        ZSeries x(floor_);
        for (const auto& [n, v] : c_) x.add_term(n, v * r);
        return x;
    }

    friend bool operator==(const ZSeries& a, const ZSeries& b) { return a.c_ == b.c_; }

    // z d/dz acting termwise (does not change the reliable floor)
    ZSeries z_dz() const {
        ZSeries x(floor_);
        for (const auto& [n, v] : c_) {
            if (n == 0) continue;
            R w = v;
            w *= Q(n);
            x.c_[n] = std::move(w);
        }
        return x;
    }
    ZSeries dz() const {
        ZSeries x(floor_ == kExactFloor ? kExactFloor : floor_ - 1);
        for (const auto& [n, v] : c_) {
            if (n == 0) continue;
            R w = v;
            w *= Q(n);
            x.c_[n - 1] = std::move(w);
        }
        return x;
    }

    template <class F>
    ZSeries map(F&& f) const {
        ZSeries x(floor_);
        for (const auto& [n, v] : c_) {
            R w = f(v);
            if (!gdh::is_zero(w)) x.c_[n] = std::move(w);
        }
        return x;
    }

    // nonnegative-order part (exact regardless of floor)
    ZSeries plus_part() const {
        ZSeries x(kExactFloor);
        for (const auto& [n, v] : c_)
            if (n >= 0) x.c_[n] = v;
        return x;
    }
    ZSeries minus_part() const {
        ZSeries x(floor_);
        for (const auto& [n, v] : c_)
            if (n < 0) x.c_[n] = v;
        return x;
    }

    // Evaluate at z = value over the coefficient ring; only defined for
    // series with no negative tail (plus-parts), i.e. polynomial evaluation.
    R subst_z(const R& value) const {
        if (!c_.empty() && c_.begin()->first < 0)
            throw std::domain_error("ZSeries: substitution into an infinite negative tail");
        R acc;
        if (c_.empty()) return acc;
        int deg = top();
        // Horner from the top
        for (int n = deg; n >= 0; --n) {
            if (n != deg) acc = acc * value;
            auto it = c_.find(n);
            if (it != c_.end()) acc += it->second;
        }
        return acc;
    }

private:
    void prune() {
        while (!c_.empty() && c_.begin()->first < floor_) c_.erase(c_.begin());
    }

    int floor_;
    std::map<int, R> c_;
};

// A^{n/r} for a commutative symbol that is monic at its top order m (unit
// leading coefficient, m*n divisible by r), via the generalized binomial
// series, truncated at `floor`.
template <class R>
ZSeries<R> frac_pow(const ZSeries<R>& a, long n, int r, int floor, const R& unit) {
    if (a.is_zero()) throw std::domain_error("frac_pow: zero base");
    int m = a.top();
    if (!gdh::is_one(a.coeff(m))) throw std::domain_error("frac_pow: base is not monic");
    if ((static_cast<long>(m) * n) % r != 0) throw std::domain_error("frac_pow: non-integral leading order");
    int base = static_cast<int>(static_cast<long>(m) * n / r);
    Q c = make_q(n, r);
    // u = z^{-m} a - 1, supported in strictly negative orders
    ZSeries<R> u(floor - base);
    for (const auto& [k, v] : a.terms())
        if (k != m) u.add_term(k - m, v);
    ZSeries<R> out(floor);
    out.add_term(base, unit);
    ZSeries<R> upow(floor - base);
    upow.add_term(0, unit);
    for (long l = 1;; ++l) {
        if (base - l < floor) break;
        upow = upow * u;
        upow.set_floor(floor - base);
        if (upow.is_zero()) break;
        Q b = frac_binom(c, l);
        if (gdh::is_zero(b)) break;  // n/r a nonnegative integer below l
        for (const auto& [k, v] : upow.terms()) {
            R w = v;
            w *= b;
            out.add_term(base + k, w);
        }
    }
    return out;
}

}  // namespace gdh
