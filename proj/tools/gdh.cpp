#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gdh/checks.hpp"
#include "gdh/oracle.hpp"
#include "gdh/state_io.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace gdh;

json cyc_json(const Cyc& v) {
    if (v.is_rational()) {
        Q q = v.is_zero() ? Q(0) : v.rational_part();
        return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
    }
    // zeta-expansion in the ring Q[zeta]/(zeta^{2(r+1)} + r)
    json terms = json::array();
    const auto& raw = v.raw();
    for (size_t i = 0; i < raw.size(); ++i)
        if (!gdh::is_zero(raw[i])) terms.push_back({static_cast<int>(i), raw[i].get_str()});
    return {{"zeta_ring", 2 * (v.ring_r() + 1)}, {"zeta", std::move(terms)}};
}

std::string cyc_str(const Cyc& v) {
    if (v.is_rational()) return (v.is_zero() ? Q(0) : v.rational_part()).get_str();
    std::string out;
    const auto& raw = v.raw();
    for (size_t i = 0; i < raw.size(); ++i) {
        if (gdh::is_zero(raw[i])) continue;
        if (!out.empty()) out += " + ";
        out += raw[i].get_str() + "*z^" + std::to_string(i);
    }
    return out;
}

struct Entry {
    std::string flavor;
    int genus;
    std::vector<std::array<int, 2>> ins;
    int k;  // boundary power
    Cyc value;
    bool conjectural;
};

void write_numbers(const std::vector<Entry>& entries, const std::string& out_path,
                   const std::string& csv_path) {
    json arr = json::array();
    for (const auto& e : entries) {
        json ins = json::array();
        for (auto [a, d] : e.ins) ins.push_back({{"a", a}, {"d", d}});
        arr.push_back({{"flavor", e.flavor},
                       {"genus", e.genus},
                       {"insertions", std::move(ins)},
                       {"k", e.k},
                       {"value", cyc_json(e.value)},
                       {"conjectural", e.conjectural},
                       {"selection_rule_checked", true}});
    }
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
        f << arr.dump(1) << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + csv_path + " for writing");
        f << "flavor,genus,insertions,k,value,conjectural,selection_rule_checked\n";
        for (const auto& e : entries) {
            std::string ins;
            for (auto [a, d] : e.ins) {
                if (!ins.empty()) ins += ";";
                ins += std::to_string(a) + ":" + std::to_string(d);
            }
            f << e.flavor << "," << e.genus << "," << ins << "," << e.k << ","
              << cyc_str(e.value) << "," << (e.conjectural ? "true" : "false") << ",true\n";
        }
    }
}

// every dimension-allowed closed correlator reachable inside the truncation
// envelope: insertion count bounded by the degree cap, descendents by dmax
std::vector<Entry> closed_numbers(ClosedPotential& F, int g, int dmax) {
    const auto& ts = F.state().spec;
    const int r = ts.r;
    const int nmax = ts.D + 2;
    std::vector<Entry> out;
    std::vector<std::pair<int, int>> ins;
    std::function<void(int, int)> walk = [&](int amin, int dmin) {
        const int n = static_cast<int>(ins.size());
        if (n >= (g == 0 ? 3 : 1)) {
            std::vector<int> ks;
            for (auto [a, d] : ins) ks.push_back(a + 1 + r * d);
            if (selection_defect(r, g, ks, 2) == 0) {
                try {
                    Cyc v = F.correlator(g, ins);
                    if (!v.is_zero())
                        out.push_back({"closed", g,
                                       [&] {
                                           std::vector<std::array<int, 2>> w;
                                           for (auto [a, d] : ins) w.push_back({a, d});
                                           return w;
                                       }(),
                                       0, v, false});
                } catch (const std::exception&) {
                    // outside the solved envelope; skip
                }
            }
        }
        if (n == nmax) return;
        for (int d = dmin; d <= dmax; ++d)
            for (int a = d == dmin ? amin : 0; a <= r - 2; ++a) {
                ins.push_back({a, d});
                walk(a, d);
                ins.pop_back();
            }
    };
    walk(0, 0);
    std::sort(out.begin(), out.end(), [](const Entry& x, const Entry& y) {
        return std::tie(x.ins, x.k) < std::tie(y.ins, y.k);
    });
    return out;
}

int cmd_solve(int r, int N, int D, int G, int M, const std::string& out) {
    TruncationSpec ts;
    ts.r = r;
    ts.N = N;
    ts.D = D;
    ts.G = G;
    ts.M = M;
    ts.validate();
    HierarchyState st = solve_hierarchy(ts);
    ESeries phi = solve_phi(st);
    save_state(out, st, &phi);
    std::cout << "solved r=" << r << " N=" << N << " D=" << D << " G=" << G << " -> " << out
              << "\n";
    return 0;
}

int cmd_numbers(const std::string& state_path, const std::string& flavor, int g,
                const std::string& out, const std::string& csv) {
    SavedState sv = load_state(state_path);
    const int r = sv.st.spec.r;
    if (g < 0 || g > sv.st.spec.G)
        throw std::invalid_argument("numbers: genus outside the solved range");
    if (!sv.has_phi && flavor != "closed") sv.phi = solve_phi(sv.st);
    std::vector<Entry> entries;
    if (flavor == "closed") {
        ClosedPotential F(sv.st);
        entries = closed_numbers(F, g, 3);
    } else {
        const bool with_s = flavor != "extended";
        auto tvt = tvar_table(r, sv.st.spec.N, with_s);
        CSeries pot;
        bool conjectural = false;
        if (flavor == "extended") {
            if (g != 0)
                throw std::invalid_argument("numbers: the extended flavor is genus 0 only");
            pot = extended_potential(sv.phi, sv.st, 0, tvt);
        } else if (flavor == "open") {
            if (g != 0)
                throw std::invalid_argument(
                    "numbers: the open flavor is the proven genus-0 series; "
                    "use the conjectural flavor for higher genus");
            pot = open_potential0(sv.phi, sv.st, tvt);
        } else if (flavor == "conjectural") {
            pot = conjectural_potential(sv.phi, sv.st, g, tvt);
            conjectural = true;
        } else {
            throw std::invalid_argument("numbers: unknown flavor " + flavor);
        }
        for (auto& c : extract_correlators(pot, g, r, 1))
            entries.push_back({flavor, g, std::move(c.ins), c.boundary, c.value, conjectural});
    }
    write_numbers(entries, out, csv);
    std::cout << entries.size() << " correlators -> " << (out.empty() ? csv : out) << "\n";
    return 0;
}

int cmd_verify(const std::string& state_path, std::vector<std::string> checks,
               const std::string& report_path) {
    SavedState sv = load_state(state_path);
    if (!sv.has_phi) sv.phi = solve_phi(sv.st);
    auto reports = run_checks(sv.st, sv.phi, checks);
    json arr = json::array();
    bool all_pass = true;
    for (const auto& rep : reports) {
        all_pass = all_pass && rep.pass;
        json entry = {{"check", rep.name},
                      {"params", rep.params},
                      {"status", rep.pass ? "pass" : "fail"},
                      {"millis", rep.millis}};
        if (rep.consistency_only) entry["consistency_only"] = true;
        if (!rep.pass) entry["residual_monomials_if_failed"] = rep.failures;
        arr.push_back(std::move(entry));
        std::cout << rep.name << " [" << rep.params << "] " << (rep.pass ? "PASS" : "FAIL")
                  << " (" << rep.millis << "ms)\n";
        for (const auto& f : rep.failures) std::cout << "    " << f << "\n";
    }
    if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + report_path + " for writing");
        f << arr.dump(1) << "\n";
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact integrable-hierarchy engine: solve, extract intersection numbers, verify"};
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.require_subcommand(1);

    int r = 2, N = 5, D = 4, G = 2, M = 0, genus = 0;
    std::string out = "state.json", state_path, numbers_out = "correlators.json", csv,
                flavor = "closed", report_path;
    std::vector<std::string> checks;

    auto* solve = app.add_subcommand("solve", "solve the hierarchy and the wave logarithm");
    solve->add_option("--r", r, "order of the Lax operator (>= 2)")->required();
    solve->add_option("--times", N, "number of times T_1..T_N carried")->required();
    solve->add_option("--degree", D, "weighted-degree cap")->required();
    solve->add_option("--genus-max", G, "highest genus to carry");
    solve->add_option("--depth", M, "extra operator-order margin (results must not depend on it)");
    solve->add_option("--out", out, "output state file");

    auto* numbers = app.add_subcommand("numbers", "extract intersection numbers from a state");
    numbers->add_option("--state", state_path, "solved state file")->required();
    numbers->add_option("--flavor", flavor, "closed|extended|open|conjectural")->required();
    numbers->add_option("--genus", genus, "genus");
    numbers->add_option("--out", numbers_out, "output JSON file");
    numbers->add_option("--csv", csv, "also export CSV with the same columns");

    auto* verify = app.add_subcommand("verify", "run identity checks against a state");
    verify->add_option("--state", state_path, "solved state file")->required();
    verify
        ->add_option("--checks", checks,
                     "subset of string,dilaton,trr1,symbols,gd,dimension,r2bridge (default all)")
        ->delimiter(',');
    verify->add_option("--report", report_path, "output report file");

    CLI11_PARSE(app, argc, argv);
    try {
        if (solve->parsed()) return cmd_solve(r, N, D, G, M, out);
        if (numbers->parsed()) return cmd_numbers(state_path, flavor, genus, numbers_out, csv);
        return cmd_verify(state_path, checks, report_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
