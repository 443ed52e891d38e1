#include "gdh/dictionary.hpp"

#include <algorithm>
#include <set>

namespace gdh {

VarIndex time_image(int r, int k) {
    if (k < 1) throw std::invalid_argument("dictionary: k must be >= 1");
    if (k % r == 0) return VarIndex::tv(r - 1, k / r - 1);
    return VarIndex::tv((k - 1) % r, (k - 1) / r);
}

Cyc time_prefactor(int r, int k) {
    if (k < 1) throw std::invalid_argument("dictionary: k must be >= 1");
    if (k % r == 0) {
        int m = k / r;
        Q den = factorial_q(m) * q_pow(Q(r), m);
        return Cyc::zeta_pow(r, -static_cast<long>(m) * (r - 2)) * (Q(1) / den);
    }
    int a = (k - 1) % r;
    int d = (k - 1) / r;
    Q den(1);
    for (int i = 0; i <= d; ++i) den *= Q(a + 1 + r * i);
    long e = 3L * k - (r + 1) - 2L * d * (r + 1);
    return Cyc::zeta_pow(r, -e) * (Q(1) / den);
}

VarTablePtr tvar_table(int r, int N, bool with_s) {
    std::set<VarIndex> vars;
    for (int k = 1; k <= N; ++k) vars.insert(time_image(r, k));
    if (with_s) vars.insert(VarIndex::s());
    auto t = std::make_shared<VarTable>();
    t->vars.assign(vars.begin(), vars.end());
    return t;
}

CSeries to_t_variables(const CSeries& s, int r, VarTablePtr tvt) {
    std::map<VarIndex, CSeries> im;
    for (const auto& v : s.table()->vars) {
        if (v.kind != VarIndex::Kind::T) continue;
        im[v] = CSeries::variable(tvt, s.cap(), time_image(r, v.n), time_prefactor(r, v.n));
    }
    return s.subst(im, tvt, s.cap());
}

CSeries to_t_variables(const QSeries& s, int r, VarTablePtr tvt) {
    return to_t_variables(s.map_coeffs<Cyc>([](const Q& q) { return Cyc(q); }), r, tvt);
}

}  // namespace gdh
