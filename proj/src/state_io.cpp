#include "gdh/state_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gdh {
namespace {

using json = nlohmann::ordered_json;

json eps_to_json(const Eps& e) {
    json out = json::array();
    for (const auto& [p, q] : e.terms()) out.push_back({p, q.get_str()});
    return out;
}

Eps eps_from_json(const json& j) {
    Eps e;
    for (const auto& t : j) {
        Q q(t.at(1).get<std::string>(), 10);
        q.canonicalize();
        e.add_term(t.at(0).get<int>(), q);
    }
    return e;
}

json series_to_json(const ESeries& s) {
    json out = json::array();
    for (const auto& [e, c] : s.terms()) {
        json expo = json::array();
        for (auto x : e) expo.push_back(static_cast<int>(x));
        out.push_back({std::move(expo), eps_to_json(c)});
    }
    return out;
}

ESeries series_from_json(const json& j, const VarTablePtr& vt, int cap) {
    ESeries s(vt, cap);
    const size_t nv = static_cast<size_t>(vt->size());
    for (const auto& term : j) {
        const json& je = term.at(0);
        if (je.size() != nv) throw std::invalid_argument("state: exponent width mismatch");
        Expo e(nv, 0);
        for (size_t i = 0; i < nv; ++i) e[i] = static_cast<std::uint8_t>(je[i].get<int>());
        s.set_term(e, eps_from_json(term.at(1)));
    }
    return s;
}

}  // namespace

std::string state_to_json(const HierarchyState& st, const ESeries* phi) {
    json out;
    out["format"] = "gdh-state-v1";
    const auto& ts = st.spec;
    out["spec"] = {{"r", ts.r}, {"N", ts.N}, {"D", ts.D}, {"G", ts.G}, {"M", ts.M}, {"J", ts.J}};
    json vars = json::array();
    for (const auto& v : st.vt->vars) vars.push_back(v.label());
    out["vars"] = std::move(vars);
    json lax = json::array();
    for (int i = 0; i < ts.r - 1; ++i)
        lax.push_back({{"order", i}, {"series", series_to_json(st.f[static_cast<size_t>(i)])}});
    out["lax"] = std::move(lax);
    if (phi) out["phi"] = series_to_json(*phi);
    return out.dump(1) + "\n";
}

SavedState state_from_json(const std::string& text) {
    json in = json::parse(text);
    if (in.at("format").get<std::string>() != "gdh-state-v1")
        throw std::invalid_argument("state: unknown format");
    SavedState out;
    const json& js = in.at("spec");
    TruncationSpec ts;
    ts.r = js.at("r").get<int>();
    ts.N = js.at("N").get<int>();
    ts.D = js.at("D").get<int>();
    ts.G = js.at("G").get<int>();
    ts.M = js.at("M").get<int>();
    ts.J = js.at("J").get<int>();
    ts.validate();
    out.st.spec = ts;
    out.st.vt = times_table(ts.N);
    if (in.at("vars").size() != static_cast<size_t>(ts.N))
        throw std::invalid_argument("state: variable list does not match the spec");
    for (int n = 1; n <= ts.N; ++n)
        if (in["vars"][static_cast<size_t>(n - 1)].get<std::string>() !=
            VarIndex::T(n).label())
            throw std::invalid_argument("state: unexpected variable order");
    const json& jl = in.at("lax");
    if (jl.size() != static_cast<size_t>(ts.r - 1))
        throw std::invalid_argument("state: wrong number of operator coefficients");
    out.st.f.resize(static_cast<size_t>(ts.r - 1));
    for (const auto& entry : jl) {
        int i = entry.at("order").get<int>();
        if (i < 0 || i > ts.r - 2) throw std::invalid_argument("state: coefficient order out of range");
        out.st.f[static_cast<size_t>(i)] = series_from_json(entry.at("series"), out.st.vt, ts.D);
    }
    check_eps_pattern(out.st);
    if (in.contains("phi")) {
        out.phi = series_from_json(in["phi"], out.st.vt, ts.D);
        out.has_phi = true;
    }
    return out;
}

void save_state(const std::string& path, const HierarchyState& st, const ESeries* phi) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("state: cannot open " + path + " for writing");
    f << state_to_json(st, phi);
    if (!f) throw std::runtime_error("state: write to " + path + " failed");
}

SavedState load_state(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("state: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return state_from_json(buf.str());
}

HierarchyState extend_state(const HierarchyState& base, const TruncationSpec& target) {
    if (target.r != base.spec.r)
        throw std::invalid_argument("state: continuation cannot change the operator order");
    if (target.N < base.spec.N || target.D < base.spec.D)
        throw std::invalid_argument("state: continuation must not shrink the envelope");
    HierarchyState big = solve_hierarchy(target);
    // cross-check the common envelope: monomials supported on the shared
    // times with weighted degree inside the smaller cap must agree exactly
    const size_t nb = static_cast<size_t>(base.vt->size());
    for (int i = 0; i <= target.r - 2; ++i) {
        const ESeries& small = base.f[static_cast<size_t>(i)];
        const ESeries& large = big.f[static_cast<size_t>(i)];
        for (const auto& [e, c] : large.terms()) {
            bool shared = large.wdeg(e) <= base.spec.D;
            for (size_t k = nb; k < e.size() && shared; ++k) shared = e[k] == 0;
            if (!shared) continue;
            Expo eb(e.begin(), e.begin() + static_cast<long>(nb));
            if (!(small.coeff(eb) == c))
                throw std::runtime_error("state: continuation disagrees with the loaded state at " +
                                         expo_label(e, *big.vt) + " in f_" + std::to_string(i));
        }
        for (const auto& [e, c] : small.terms()) {
            Expo eg(static_cast<size_t>(big.vt->size()), 0);
            for (size_t k = 0; k < nb; ++k) eg[k] = e[k];
            if (!(large.coeff(eg) == c))
                throw std::runtime_error("state: continuation lost a monomial at " +
                                         expo_label(e, *base.vt) + " in f_" + std::to_string(i));
        }
    }
    return big;
}

}  // namespace gdh
