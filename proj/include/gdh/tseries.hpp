#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gdh/cyc.hpp"
#include "gdh/eps_laurent.hpp"
#include "gdh/rational.hpp"
#include "gdh/var_index.hpp"

namespace gdh {

using Expo = std::vector<std::uint8_t>;

inline int expo_degree(const Expo& e) {
    int s = 0;
    for (auto x : e) s += x;
    return s;
}

template <class C>
C from_q(const Q& q) {
    return C(q);
}
template <>
inline Q from_q<Q>(const Q& q) {
    return q;
}

// Multivariate formal series in the variables of a VarTable, truncated at a
// cap on the *weighted* total degree (weight-0 variables, i.e. the x-like
// ones, are free). Weight-0 degrees stay finite by themselves for the
// solutions handled here; for objects where they do not (exponentials of
// potentials) an explicit window `xcap` on the weight-0 degree can be set,
// and terms beyond it are silently dropped. Coefficients live in an exact
// commutative ring C (Q, Eps, or Cyc). Terms are kept in a map ordered
// lexicographically by exponent vector, which also fixes serialization order.
template <class C>
class TSeries {
public:
    TSeries() : cap_(0), xcap_(-1) {}
    TSeries(VarTablePtr vt, int cap, int xcap = -1) : vt_(std::move(vt)), cap_(cap), xcap_(xcap) {
        if (cap_ < 0) throw std::invalid_argument("TSeries: negative degree cap");
    }

    static TSeries constant(VarTablePtr vt, int cap, C value, int xcap = -1) {
        TSeries s(std::move(vt), cap, xcap);
        if (!gdh::is_zero(value)) s.terms_[Expo(static_cast<size_t>(s.vt_->size()), 0)] = std::move(value);
        return s;
    }
    static TSeries variable(VarTablePtr vt, int cap, const VarIndex& v, C coeff = from_q<C>(Q(1))) {
        TSeries s(std::move(vt), cap);
        Expo e(static_cast<size_t>(s.vt_->size()), 0);
        e[static_cast<size_t>(s.vt_->require(v))] = 1;
        if (s.wdeg(e) > cap) throw std::invalid_argument("TSeries: cap too small for a variable");
        if (!gdh::is_zero(coeff)) s.terms_[std::move(e)] = std::move(coeff);
        return s;
    }

    const VarTablePtr& table() const { return vt_; }
    int cap() const { return cap_; }
    int xcap() const { return xcap_; }
    int nvars() const { return vt_ ? vt_->size() : 0; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Expo, C>& terms() const { return terms_; }

    // weighted degree of an exponent vector under this table
    int wdeg(const Expo& e) const {
        int s = 0;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) s += e[i] * vt_->vars[i].weight();
        return s;
    }
    // degree in the weight-0 variables
    int xdeg(const Expo& e) const {
        int s = 0;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] && vt_->vars[i].weight() == 0) s += e[i];
        return s;
    }

    C coeff(const Expo& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? C() : it->second;
    }
    C constant_term() const { return terms_.empty() ? C() : coeff(Expo(static_cast<size_t>(nvars()), 0)); }

    void add_term(const Expo& e, const C& c) {
        if (gdh::is_zero(c)) return;
        if (wdeg(e) > cap_) throw std::out_of_range("TSeries: term beyond degree cap");
        if (xcap_ >= 0 && xdeg(e) > xcap_) return;  // outside the explicit window
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (gdh::is_zero(it->second)) terms_.erase(it);
        }
    }
    void set_term(const Expo& e, C c) {
        if (wdeg(e) > cap_) throw std::out_of_range("TSeries: term beyond degree cap");
        if (xcap_ >= 0 && xdeg(e) > xcap_) return;
        if (gdh::is_zero(c))
            terms_.erase(e);
        else
            terms_[e] = std::move(c);
    }

    TSeries& operator+=(const TSeries& o) {
        adopt_shape(o);
        check_compat(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    TSeries& operator-=(const TSeries& o) {
        adopt_shape(o);
        check_compat(o);
        for (const auto& [e, c] : o.terms_) add_term(e, negate(c));
        return *this;
    }
    TSeries operator-() const {
        TSeries x = shell();
        for (const auto& [e, c] : terms_) x.terms_[e] = negate(c);
        return x;
    }
    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }

    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        a.check_compat(b);
        TSeries x = a.vt_ ? a.shell() : b.shell();
        if (a.is_zero() || b.is_zero()) return x;
        for (const auto& [ea, ca] : a.terms_) {
            int wa = x.wdeg(ea), xa = x.xdeg(ea);
            for (const auto& [eb, cb] : b.terms_) {
                if (wa + x.wdeg(eb) > x.cap_) continue;
                if (x.xcap_ >= 0 && xa + x.xdeg(eb) > x.xcap_) continue;
                Expo e(ea);
                for (size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(e[i] + eb[i]);
                x.add_term(e, ca * cb);
            }
        }
        return x;
    }
    TSeries& operator*=(const TSeries& o) { return *this = *this * o; }
    TSeries& operator*=(const Q& q) { return *this = scaled_q(q); }

    TSeries scaled(const C& c) const {
        TSeries x = shell();
        if (gdh::is_zero(c)) return x;
        for (const auto& [e, v] : terms_) {
            C p = v * c;
            if (!gdh::is_zero(p)) x.terms_[e] = std::move(p);
        }
        return x;
    }
    TSeries scaled_q(const Q& q) const {
        TSeries x = shell();
        if (gdh::is_zero(q)) return x;
        for (const auto& [e, v] : terms_) {
            C p = v * q;
            if (!gdh::is_zero(p)) x.terms_[e] = std::move(p);
        }
        return x;
    }

    friend bool operator==(const TSeries& a, const TSeries& b) {
        if (!same_table(a.vt_, b.vt_) && !(a.is_zero() && b.is_zero())) return false;
        return a.terms_ == b.terms_;
    }

    // d/dv
    TSeries diff(const VarIndex& v) const {
        int i = vt_ ? vt_->require(v) : 0;
        return diff_idx(i);
    }
    TSeries diff_idx(int i) const {
        TSeries x = shell();
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<size_t>(i)];
            if (k == 0) continue;
            Expo e2(e);
            e2[static_cast<size_t>(i)] = static_cast<std::uint8_t>(k - 1);
            x.add_term(e2, c * Q(k));
        }
        return x;
    }

    // antiderivative in v with zero constant slice; rejects terms that would
    // overflow the weighted degree cap
    TSeries integrate(const VarIndex& v) const {
        int i = vt_->require(v);
        int w = vt_->vars[static_cast<size_t>(i)].weight();
        TSeries x = shell();
        for (const auto& [e, c] : terms_) {
            if (wdeg(e) + w > cap_)
                throw std::out_of_range("TSeries: integration overflows the degree cap");
            Expo e2(e);
            int k = e2[static_cast<size_t>(i)] + 1;
            e2[static_cast<size_t>(i)] = static_cast<std::uint8_t>(k);
            x.add_term(e2, c * (Q(1) / Q(k)));
        }
        return x;
    }

    // set v = 0
    TSeries at_zero(const VarIndex& v) const {
        int i = vt_->require(v);
        TSeries x = shell();
        for (const auto& [e, c] : terms_)
            if (e[static_cast<size_t>(i)] == 0) x.terms_[e] = c;
        return x;
    }

    TSeries truncated(int new_cap) const {
        TSeries x(vt_, new_cap, xcap_);
        for (const auto& [e, c] : terms_)
            if (wdeg(e) <= new_cap) x.terms_[e] = c;
        return x;
    }
    // apply / change the weight-0 window
    TSeries with_xcap(int xc) const {
        TSeries x(vt_, cap_, xc);
        for (const auto& [e, c] : terms_)
            if (xc < 0 || xdeg(e) <= xc) x.terms_[e] = c;
        return x;
    }

    int max_degree() const {
        int m = 0;
        for (const auto& [e, c] : terms_) m = std::max(m, wdeg(e));
        return m;
    }
    int max_xdegree() const {
        int m = 0;
        for (const auto& [e, c] : terms_) m = std::max(m, xdeg(e));
        return m;
    }

    // Substitution v -> images[v]; variables absent from the map stay
    // themselves. Images must live on the target variable table.
    TSeries subst(const std::map<VarIndex, TSeries>& images, VarTablePtr target_vt = nullptr,
                  int target_cap = -1) const {
        VarTablePtr tvt = target_vt ? target_vt : vt_;
        int tcap = target_cap >= 0 ? target_cap : cap_;
        TSeries out(tvt, tcap);
        if (terms_.empty()) return out;
        // per-variable image, defaulting to the variable itself
        std::vector<TSeries> img;
        img.reserve(static_cast<size_t>(nvars()));
        for (int i = 0; i < nvars(); ++i) {
            auto it = images.find(vt_->vars[static_cast<size_t>(i)]);
            if (it != images.end()) {
                if (!same_table(it->second.table(), tvt))
                    throw std::invalid_argument("TSeries::subst: image on wrong variable table");
                img.push_back(it->second.truncated(tcap));
            } else {
                img.push_back(variable(tvt, tcap, vt_->vars[static_cast<size_t>(i)]));
            }
        }
        // cache powers of images
        std::vector<std::vector<TSeries>> pw(static_cast<size_t>(nvars()));
        for (int i = 0; i < nvars(); ++i) pw[static_cast<size_t>(i)].push_back(constant(tvt, tcap, from_q<C>(Q(1))));
        auto power = [&](int i, int k) -> const TSeries& {
            auto& v = pw[static_cast<size_t>(i)];
            while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * img[static_cast<size_t>(i)]);
            return v[static_cast<size_t>(k)];
        };
        for (const auto& [e, c] : terms_) {
            TSeries term = constant(tvt, tcap, c);
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i]) term *= power(static_cast<int>(i), e[i]);
            out += term;
        }
        return out;
    }

    // exp of a series with zero constant term. Needs a finite weight-0
    // window unless the argument has no weight-0-pure terms.
    TSeries exp() const {
        if (!gdh::is_zero(constant_term()))
            throw std::domain_error("TSeries::exp: nonzero constant term");
        TSeries out = constant(vt_, cap_, from_q<C>(Q(1)), xcap_);
        TSeries p = out;
        int limit = cap_ + (xcap_ >= 0 ? xcap_ : 0) + 1;
        for (int k = 1; k <= limit && !p.is_zero(); ++k) {
            p = p * *this;
            if (p.is_zero()) break;
            out += p.scaled_q(Q(1) / factorial_q(k));
        }
        if (!p.is_zero())
            throw std::domain_error("TSeries::exp: series does not terminate; set a weight-0 window");
        return out;
    }

    // log of a series with constant term exactly 1
    TSeries log() const {
        if (!gdh::is_one(constant_term()))
            throw std::domain_error("TSeries::log: constant term is not 1");
        TSeries x = *this;
        x.add_term(Expo(static_cast<size_t>(nvars()), 0), negate(from_q<C>(Q(1))));
        TSeries out = shell();
        TSeries p = constant(vt_, cap_, from_q<C>(Q(1)), xcap_);
        int limit = cap_ + (xcap_ >= 0 ? xcap_ : 0) + 1;
        for (int k = 1; k <= limit && !p.is_zero(); ++k) {
            p = p * x;
            if (p.is_zero()) break;
            out += p.scaled_q(Q(k % 2 == 1 ? 1 : -1) / Q(k));
        }
        if (!p.is_zero())
            throw std::domain_error("TSeries::log: series does not terminate; set a weight-0 window");
        return out;
    }

    // empty series with the same table/cap/window
    TSeries shell() const { return TSeries(vt_, cap_, xcap_); }

    template <class C2, class F>
    TSeries<C2> map_coeffs(F&& f) const {
        TSeries<C2> out(vt_, cap_, xcap_);
        for (const auto& [e, c] : terms_) {
            C2 v = f(c);
            if (!gdh::is_zero(v)) out.set_term(e, std::move(v));
        }
        return out;
    }

private:
    // A default-constructed zero has no table; let it take the other
    // operand's table/cap so accumulators can start from TSeries().
    void adopt_shape(const TSeries& o) {
        if (!vt_ && o.vt_) {
            vt_ = o.vt_;
            cap_ = o.cap_;
            xcap_ = o.xcap_;
        }
    }
    static C negate(const C& c) {
        C x = c;
        x *= Q(-1);
        return x;
    }
    void check_compat(const TSeries& o) const {
        if (!vt_ || !o.vt_) {
            if (!(is_zero() || o.is_zero()))
                throw std::invalid_argument("TSeries: uninitialized operand");
            return;
        }
        if (!same_table(vt_, o.vt_) || cap_ != o.cap_ || xcap_ != o.xcap_)
            throw std::invalid_argument("TSeries: incompatible truncation specs");
    }

    VarTablePtr vt_;
    int cap_;
    int xcap_;
    std::map<Expo, C> terms_;
};

using QSeries = TSeries<Q>;
using ESeries = TSeries<Eps>;
using CSeries = TSeries<Cyc>;

template <class C>
bool is_zero(const TSeries<C>& s) {
    return s.is_zero();
}
template <class C>
bool is_one(const TSeries<C>& s) {
    if (s.terms().size() != 1) return false;
    const auto& [e, c] = *s.terms().begin();
    return expo_degree(e) == 0 && gdh::is_one(c);
}

// x-derivative: x is T_1
template <class C>
TSeries<C> dx(const TSeries<C>& s) {
    return s.diff(VarIndex::T(1));
}

// coefficient of eps^power, as an eps-free series
inline QSeries eps_coeff(const ESeries& s, int power) {
    return s.map_coeffs<Q>([power](const Eps& e) { return e.coeff(power); });
}

inline ESeries lift_to_eps(const QSeries& s, int power = 0) {
    return s.map_coeffs<Eps>([power](const Q& q) { return Eps(power, q); });
}

}  // namespace gdh
