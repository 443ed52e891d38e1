#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "gdh/rational.hpp"

namespace gdh {

// Element of Q[zeta] / (zeta^{2(r+1)} + r), where zeta is the chosen root
// (-r)^{1/(2(r+1))}. In particular sqrt(-r) = zeta^{r+1}. Elements that are
// plain rationals may be carried with r unset (r_ == 0), so that generic
// series code can build constants without knowing r; they promote on contact
// with a full element.
class Cyc {
public:
    Cyc() : r_(0) {}
    explicit Cyc(const Q& q) : r_(0) {
        if (!gdh::is_zero(q)) c_.assign(1, q);
    }
    Cyc(int r, std::vector<Q> coeffs) : r_(r), c_(std::move(coeffs)) {
        if (r_ < 2) throw std::invalid_argument("Cyc: r must be >= 2");
        if (static_cast<int>(c_.size()) != order()) throw std::invalid_argument("Cyc: bad coefficient count");
        trim();
    }

    static Cyc zero() { return Cyc(); }
    static Cyc one() { return Cyc(Q(1)); }

    // zeta^e for any integer e (negative exponents use zeta^{-1} = -zeta^{2r+1}/r).
    static Cyc zeta_pow(int r, long e) {
        const long m = 2L * (r + 1);
        long q = e >= 0 ? e / m : -((-e + m - 1) / m);
        long rem = e - q * m;  // in [0, m)
        std::vector<Q> c(static_cast<size_t>(m), Q(0));
        c[static_cast<size_t>(rem)] = q_pow(Q(-r), q);
        return Cyc(r, std::move(c));
    }

    int ring_r() const { return r_; }
    int order() const { return r_ == 0 ? 1 : 2 * (r_ + 1); }
    bool is_zero() const { return c_.empty(); }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (!gdh::is_zero(c_[i])) return false;
        return true;
    }
    // Throws unless the zeta-part vanished.
    Q rational_part() const {
        if (!is_rational()) throw std::domain_error("Cyc: value is not rational");
        return c_.empty() ? Q(0) : c_[0];
    }
    const Q& coeff(int i) const {
        static const Q kZero(0);
        return i < static_cast<int>(c_.size()) ? c_[static_cast<size_t>(i)] : kZero;
    }

    Cyc& operator+=(const Cyc& o) {
        promote_with(o);
        Cyc rhs = o;
        rhs.promote_with(*this);
        if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size(), Q(0));
        for (size_t i = 0; i < rhs.c_.size(); ++i) c_[i] += rhs.c_[i];
        trim();
        return *this;
    }
    Cyc& operator-=(const Cyc& o) { return *this += -o; }
    Cyc operator-() const {
        Cyc x = *this;
        for (auto& q : x.c_) q = -q;
        return x;
    }
    friend Cyc operator+(Cyc a, const Cyc& b) { return a += b; }
    friend Cyc operator-(Cyc a, const Cyc& b) { return a -= b; }

    friend Cyc operator*(const Cyc& a, const Cyc& b) {
        if (a.is_zero() || b.is_zero()) return Cyc();
        int r = std::max(a.r_, b.r_);
        if (a.r_ && b.r_ && a.r_ != b.r_) throw std::invalid_argument("Cyc: mixed rings");
        if (r == 0) return Cyc(a.c_[0] * b.c_[0]);
        const int m = 2 * (r + 1);
        std::vector<Q> prod(static_cast<size_t>(2 * m), Q(0));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (gdh::is_zero(a.c_[i])) continue;
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (gdh::is_zero(b.c_[j])) continue;
                prod[i + j] += a.c_[i] * b.c_[j];
            }
        }
        // reduce with zeta^m = -r
        std::vector<Q> red(static_cast<size_t>(m), Q(0));
        for (int i = 0; i < 2 * m; ++i) {
            if (gdh::is_zero(prod[static_cast<size_t>(i)])) continue;
            if (i < m)
                red[static_cast<size_t>(i)] += prod[static_cast<size_t>(i)];
            else
                red[static_cast<size_t>(i - m)] += Q(-r) * prod[static_cast<size_t>(i)];
        }
        return Cyc(r, std::move(red));
    }
    Cyc& operator*=(const Cyc& o) { return *this = *this * o; }
    friend Cyc operator*(const Cyc& a, const Q& q) {
        Cyc x = a;
        for (auto& c : x.c_) c *= q;
        x.trim();
        return x;
    }
    Cyc& operator*=(const Q& q) { return *this = *this * q; }

    // Multiplicative inverse in the quotient ring, found by solving the
    // 2(r+1) x 2(r+1) linear system a * x = 1. Throws if a is a zero divisor.
    Cyc inverse() const {
        if (is_zero()) throw std::domain_error("Cyc: inverse of zero");
        if (r_ == 0) return Cyc(Q(1) / c_[0]);
        const int m = order();
        // columns: a * zeta^j
        std::vector<std::vector<Q>> M(static_cast<size_t>(m), std::vector<Q>(static_cast<size_t>(m + 1), Q(0)));
        for (int j = 0; j < m; ++j) {
            Cyc col = *this * zeta_pow(r_, j);
            for (int i = 0; i < m; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.coeff(i);
        }
        M[0][static_cast<size_t>(m)] = Q(1);
        // Gaussian elimination over Q
        int row = 0;
        std::vector<int> pivot_col(static_cast<size_t>(m), -1);
        for (int col = 0; col < m && row < m; ++col) {
            int p = -1;
            for (int i = row; i < m; ++i)
                if (!gdh::is_zero(M[static_cast<size_t>(i)][static_cast<size_t>(col)])) { p = i; break; }
            if (p < 0) continue;
            std::swap(M[static_cast<size_t>(p)], M[static_cast<size_t>(row)]);
            Q inv = Q(1) / M[static_cast<size_t>(row)][static_cast<size_t>(col)];
            for (auto& v : M[static_cast<size_t>(row)]) v *= inv;
            for (int i = 0; i < m; ++i) {
                if (i == row) continue;
                Q f = M[static_cast<size_t>(i)][static_cast<size_t>(col)];
                if (gdh::is_zero(f)) continue;
                for (int j2 = col; j2 <= m; ++j2)
                    M[static_cast<size_t>(i)][static_cast<size_t>(j2)] -= f * M[static_cast<size_t>(row)][static_cast<size_t>(j2)];
            }
            pivot_col[static_cast<size_t>(row)] = col;
            ++row;
        }
        std::vector<Q> x(static_cast<size_t>(m), Q(0));
        for (int i = 0; i < m; ++i) {
            if (pivot_col[static_cast<size_t>(i)] >= 0)
                x[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] = M[static_cast<size_t>(i)][static_cast<size_t>(m)];
        }
        Cyc cand(r_, std::move(x));
        if (!((*this * cand) == one())) throw std::domain_error("Cyc: element is not invertible");
        return cand;
    }

    friend bool operator==(const Cyc& a, const Cyc& b) {
        size_t n = std::max(a.c_.size(), b.c_.size());
        if (a.r_ && b.r_ && a.r_ != b.r_) return false;
        for (size_t i = 0; i < n; ++i) {
            const Q& x = i < a.c_.size() ? a.c_[i] : Q(0);
            const Q& y = i < b.c_.size() ? b.c_[i] : Q(0);
            if (x != y) return false;
        }
        return true;
    }

    const std::vector<Q>& raw() const { return c_; }

private:
    void trim() {
        while (!c_.empty() && gdh::is_zero(c_.back())) c_.pop_back();
    }
    void promote_with(const Cyc& o) {
        if (r_ == 0 && o.r_ != 0) r_ = o.r_;
        if (r_ && o.r_ && r_ != o.r_) throw std::invalid_argument("Cyc: mixed rings");
    }

    int r_;
    std::vector<Q> c_;  // trailing zeros trimmed; empty == 0
};

inline bool is_zero(const Cyc& c) { return c.is_zero(); }
inline bool is_one(const Cyc& c) { return c == Cyc::one(); }

// sqrt(-r) = zeta^{r+1}
inline Cyc sqrt_minus_r(int r) { return Cyc::zeta_pow(r, r + 1); }

}  // namespace gdh
