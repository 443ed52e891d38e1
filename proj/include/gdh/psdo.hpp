#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "gdh/tseries.hpp"
#include "gdh/zseries.hpp"

namespace gdh {

// Pseudo-differential operator sum_k a_k dx^k with coefficients in R.
// `floor` marks the lowest order whose coefficient is reliable: everything
// below is unknown and dropped. kExactFloor means no truncation. Composition
// uses dx^k f = sum_l binom(k,l) f^(l) dx^{k-l} with the falling-factorial
// binomial, valid for all integer k.
template <class R>
class PsDO {
public:
    explicit PsDO(int floor = kExactFloor) : floor_(floor) {}

    static PsDO dx_power(int k, const R& unit, int floor = kExactFloor) {
        PsDO a(floor);
        a.add_term(k, unit);
        return a;
    }

    int floor() const { return floor_; }
    void set_floor(int f) {
        floor_ = f;
        prune();
    }
    bool is_zero() const { return c_.empty(); }
    const std::map<int, R>& terms() const { return c_; }
    int top() const {
        if (c_.empty()) throw std::domain_error("PsDO: top() of zero");
        return c_.rbegin()->first;
    }
    int low() const {
        if (c_.empty()) throw std::domain_error("PsDO: low() of zero");
        return c_.begin()->first;
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

    PsDO& operator+=(const PsDO& o) {
        floor_ = std::max(floor_, o.floor_);
        prune();
        for (const auto& [n, v] : o.c_) add_term(n, v);
        return *this;
    }
    PsDO& operator-=(const PsDO& o) {
        floor_ = std::max(floor_, o.floor_);
        prune();
        for (const auto& [n, v] : o.c_) {
            R neg = v;
            neg *= Q(-1);
            add_term(n, neg);
        }
        return *this;
    }
    friend PsDO operator+(PsDO a, const PsDO& b) { return a += b; }
    friend PsDO operator-(PsDO a, const PsDO& b) { return a -= b; }

    PsDO scaled_q(const Q& q) const {
        PsDO x(floor_);
        if (gdh::is_zero(q)) return x;
        for (const auto& [n, v] : c_) {
            R w = v;
            w *= q;
            if (!gdh::is_zero(w)) x.c_[n] = std::move(w);
        }
        return x;
    }
    // left multiplication by a function of x
    PsDO scaled(const R& f) const {
        PsDO x(floor_);
        for (const auto& [n, v] : c_) x.add_term(n, f * v);
        return x;
    }

    friend bool operator==(const PsDO& a, const PsDO& b) { return a.c_ == b.c_; }

    // differential-operator part (orders >= 0; exact regardless of floor)
    PsDO plus_part() const {
        PsDO x(kExactFloor);
        for (const auto& [n, v] : c_)
            if (n >= 0) x.c_[n] = v;
        return x;
    }
    PsDO minus_part() const {
        PsDO x(floor_);
        for (const auto& [n, v] : c_)
            if (n < 0) x.c_[n] = v;
        return x;
    }
    // coefficient of dx^{-1}
    R residue() const {
        if (floor_ > -1) throw std::domain_error("PsDO: residue below the reliable floor");
        return coeff(-1);
    }

    ZSeries<R> symbol() const {
        ZSeries<R> z(floor_);
        for (const auto& [n, v] : c_) z.set_term(n, v);
        return z;
    }
    static PsDO from_symbol(const ZSeries<R>& z) {
        PsDO a(z.floor());
        for (const auto& [n, v] : z.terms()) a.c_[n] = v;
        return a;
    }

    template <class R2, class F>
    PsDO<R2> map_coeffs(F&& f) const {
        PsDO<R2> out(floor_);
        for (const auto& [n, v] : c_) {
            R2 w = f(v);
            if (!gdh::is_zero(w)) out.set_term(n, std::move(w));
        }
        return out;
    }

private:
    void prune() {
        while (!c_.empty() && c_.begin()->first < floor_) c_.erase(c_.begin());
    }

    int floor_;
    std::map<int, R> c_;
};

// A o B. `floor_cap` truncates the result; required when A has negative
// orders over a coefficient ring where dx-chains do not terminate. The
// result floor also accounts for the operands' own truncation.
template <class R>
PsDO<R> compose(const PsDO<R>& A, const PsDO<R>& B, int floor_cap = kExactFloor) {
    int fl = floor_cap;
    if (A.floor() != kExactFloor && !B.is_zero()) fl = std::max(fl, A.floor() + B.top());
    if (B.floor() != kExactFloor && !A.is_zero()) fl = std::max(fl, B.floor() + A.top());
    PsDO<R> out(fl);
    if (A.is_zero() || B.is_zero()) return out;
    constexpr long kMaxLeibniz = 4096;  // safety for non-terminating dx chains
    for (const auto& [j, g] : B.terms()) {
        std::vector<R> der{g};  // dx^l g
        for (const auto& [k, f] : A.terms()) {
            for (long l = 0;; ++l) {
                int ord = k - static_cast<int>(l) + j;
                if (ord < fl) break;
                if (k >= 0 && l > k) break;
                if (l >= static_cast<long>(der.size())) der.push_back(dx(der.back()));
                const R& gl = der[static_cast<size_t>(l)];
                if (gdh::is_zero(gl)) break;
                if (l > kMaxLeibniz)
                    throw std::domain_error("PsDO: composition tail does not terminate; set a floor");
                R term = f * gl;
                term *= falling_binom(k, l);
                out.add_term(ord, term);
            }
        }
    }
    return out;
}

template <class R>
PsDO<R> commutator(const PsDO<R>& A, const PsDO<R>& B, int floor_cap = kExactFloor) {
    return compose(A, B, floor_cap) - compose(B, A, floor_cap);
}

// A^e (e >= 1) with the result reliable down to `floor`. Intermediate powers
// are capped as tightly as the remaining factors allow.
template <class R>
PsDO<R> power_floor(const PsDO<R>& A, int e, int floor) {
    if (e < 1) throw std::invalid_argument("PsDO: power_floor needs e >= 1");
    if (A.is_zero()) return PsDO<R>(floor);
    int m = A.top();
    PsDO<R> p = A;
    for (int i = 2; i <= e; ++i) {
        int cap = floor == kExactFloor ? kExactFloor : floor - (e - i) * m;
        p = compose(p, A, cap);
    }
    if (floor != kExactFloor) p.set_floor(std::max(p.floor(), floor));
    return p;
}

// The unique r-th root dx + sum_{n>=0} b_n dx^{-n} of a monic operator
// A = dx^r + (orders <= r-2), reliable down to `floor`. Coefficients are
// matched top-down: at step n the order r-1-n coefficient of B^r is
// delta + r*b_n with delta already determined, so b_n = (a - delta)/r.
template <class R>
PsDO<R> rth_root(const PsDO<R>& A, int r, int floor, const R& unit) {
    if (r < 2) throw std::invalid_argument("PsDO: rth_root needs r >= 2");
    if (A.is_zero() || A.top() != r || !gdh::is_one(A.coeff(r)))
        throw std::domain_error("PsDO: rth_root needs a monic operator of order r");
    if (floor > 1) throw std::invalid_argument("PsDO: root floor must be <= 1");
    PsDO<R> B(1);
    B.set_term(1, unit);
    for (int n = 0; -n >= floor; ++n) {
        int q = r - 1 - n;
        if (A.floor() != kExactFloor && q < A.floor())
            throw std::domain_error("PsDO: rth_root needs the base reliable down to order r-1+floor");
        // pretend the (still zero) b_n slot is known so B^r at order q is
        // current-best; the miss is exactly r*b_n
        B.set_floor(-n);
        PsDO<R> P = power_floor(B, r, q);
        R b = A.coeff(q) - P.coeff(q);
        if (!gdh::is_zero(b)) {
            b *= make_q(1, r);
            B.set_term(-n, std::move(b));
        }
    }
    B.set_floor(floor);
    return B;
}

// A^{n/r} for n >= 1, reliable down to `floor`. Integer powers skip the root.
template <class R>
PsDO<R> power_frac(const PsDO<R>& A, int n, int r, int floor, const R& unit) {
    if (n < 1) throw std::invalid_argument("PsDO: power_frac needs n >= 1");
    if (n % r == 0) return power_floor(A, n / r, floor);
    int root_floor = floor == kExactFloor ? kExactFloor : floor - n + 1;
    if (root_floor == kExactFloor)
        throw std::invalid_argument("PsDO: fractional powers need a finite floor");
    PsDO<R> root = rth_root(A, r, root_floor, unit);
    return power_floor(root, n, floor);
}

// Apply a differential operator (min order >= 0) to a function of x.
template <class R>
R apply_diffop(const PsDO<R>& A, const R& f) {
    R out;
    if (A.is_zero()) return out;
    if (A.low() < 0) throw std::domain_error("PsDO: apply needs a differential operator");
    std::vector<R> der{f};
    for (const auto& [k, a] : A.terms()) {
        while (static_cast<int>(der.size()) <= k) der.push_back(dx(der.back()));
        out += a * der[static_cast<size_t>(k)];
    }
    return out;
}

}  // namespace gdh
