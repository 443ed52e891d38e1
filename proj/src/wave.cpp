#include "gdh/wave.hpp"

namespace gdh {

ESeries solve_phi(const HierarchyState& st) {
    const auto& ts = st.spec;
    const ESeries unit = st.unit();
    // f is fully solved, so the flow operators are exact at every stored degree
    auto plus = flow_plus_parts(st.lax(), ts, unit);
    ESeries phi(st.vt, ts.D);
    for (int layer = 0; layer < ts.D; ++layer) {
        // B_i from phi layers <= layer; exact there
        int imax = 0;
        for (const auto& P : plus)
            if (!P.is_zero()) imax = std::max(imax, P.top());
        std::vector<ESeries> B{unit};
        ESeries phix = dx(phi);
        for (int i = 1; i <= imax; ++i) B.push_back(dx(B.back()) + phix * B.back());
        std::vector<ESeries> rhs(static_cast<size_t>(ts.N + 1));
        for (int n = 2; n <= ts.N; ++n) {
            ESeries acc(st.vt, ts.D);
            for (const auto& [i, R] : plus[static_cast<size_t>(n - 1)].terms())
                acc += R * B[static_cast<size_t>(i)];
            rhs[static_cast<size_t>(n)] =
                acc.map_coeffs<Eps>([n](const Eps& e) { return e.shifted(n - 1); });
        }
        integrate_layer(phi, rhs, layer, ts.N, "phi");
    }
    check_phi_genus(phi);
    return phi;
}

void check_phi_genus(const ESeries& phi) {
    for (const auto& [e, c] : phi.terms()) {
        if (c.is_zero()) continue;
        if (c.lowest() < -1)
            throw std::runtime_error("wave: phi at " + expo_label(e, *phi.table()) +
                                     " has eps exponent " + std::to_string(c.lowest()) +
                                     ", i.e. a negative-genus stratum");
    }
}

ESeries grading_apply(const ESeries& s, int r) {
    ESeries out = s.diff(VarIndex::T(r + 1)).scaled_q(Q(1) / Q(r + 1));
    out -= s.map_coeffs<Eps>([](const Eps& e) { return e.eps_scaled(); });
    // Euler part: sum_i T_i d/dT_i scales each monomial by its full exponent sum
    ESeries euler = s.shell();
    for (const auto& [e, c] : s.terms()) {
        int deg = expo_degree(e);
        if (deg) euler.add_term(e, c * Q(deg));
    }
    return out - euler;
}

ESeries wave_function(const ESeries& phi, int xcap) {
    return phi.with_xcap(xcap).exp();
}

}  // namespace gdh
