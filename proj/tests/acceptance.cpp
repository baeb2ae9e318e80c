// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "levelzero/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace levelzero;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string summary(const SuiteReport& r) { return std::to_string(r.checks.size() - r.failures()) + "/" + std::to_string(r.checks.size()) + " checks"; }

std::optional<std::filesystem::path> cache() { return default_cache_dir(); }

Outcome finite_identities() {
    auto t0 = Clock::now();
    auto rep = run_s2(default_s2_groups(), cache());
    double t = seconds_since(t0);
    bool fast = t <= 60;
    return {rep.pass() && fast, summary(rep) + " over " + std::to_string(default_s2_groups().size()) + " groups in " + std::to_string(t) + " s (limit 60)"};
}

Outcome cuspidal_projection() {
    auto rep = run_cusp(default_s2_groups(), cache());
    bool trivial = false;
    for (const auto& c : rep.checks)
        if (c.config.contains("function") && c.config["function"] == "trivial") trivial = c.pass && c.computed == "(-1/2, 1/2, 1)";
    return {rep.pass() && trivial, summary(rep) + (trivial ? ", trivial of GL2(F2) -> (-1/2, 1/2, 1)" : ", trivial of GL2(F2) wrong")};
}

Outcome induction_independence() {
    auto rep = run_ind(default_s2_groups(), cache());
    return {rep.pass(), summary(rep)};
}

Outcome unity_partition() {
    auto t0 = Clock::now();
    MonteCarloConfig mc;
    auto exact = run_partition({"A1", "A2", "B2"}, 2, mc);
    bool all_exact = exact.pass();
    for (const auto& c : exact.checks) all_exact = all_exact && c.exact;
    auto a3 = run_partition({"A3"}, 2, mc);
    // Every fixed-space group must sum to 1 within 5e-3, however it was computed.
    double worst = 0;
    for (const auto& c : a3.checks) {
        double v = c.exact ? parse_rational(c.computed).get_d() : std::stod(c.computed);
        worst = std::max(worst, std::abs(v - 1));
    }
    double t = seconds_since(t0);
    bool ok = all_exact && a3.pass() && worst <= 5e-3 && t <= 120;
    char buf[160];
    std::snprintf(buf, sizeof buf, "; A3 max |sum-1| = %.2e over %zu groups; %.1f s (limit 120)", worst, a3.checks.size(), t);
    return {ok, summary(exact) + " exact for A1/A2/B2" + buf};
}

Outcome sign_identity() {
    auto rep = run_sign({"A1", "A2", "A1xA1"}, 10);
    return {rep.pass(), summary(rep) + " on B_10"};
}

Outcome bijections_and_lemmas() {
    auto rep = run_bijection({"A1", "A2", "A1xA1"}, 10);
    std::map<std::string, int> kinds;
    for (const auto& c : rep.checks)
        if (c.config.contains("property")) ++kinds[c.config["property"].get<std::string>()];
    std::string detail = summary(rep) + " on B_10 (";
    for (const auto& [k, n] : kinds) detail += k + ":" + std::to_string(n) + " ";
    detail += ")";
    return {rep.pass() && kinds.size() >= 3, detail};
}

Outcome stratification() {
    auto rep = run_strat({"A1", "A2", "B2", "G2", "A1xA1", "A3"}, 5, 1000, 0xC0FFEE);
    return {rep.pass(), summary(rep) + ", N = 5, 1000 points per type"};
}

Outcome cancellation() {
    auto t0 = Clock::now();
    MonteCarloConfig mc;
    bool ok = true;
    std::set<std::string> values;
    long total = 0;
    for (const char* t : {"A1", "A2"}) {
        auto rep = run_prop16(t, 5, 40, mc);
        ok = ok && rep.pass();
        total += static_cast<long>(rep.checks.size());
        for (const auto& c : rep.checks) {
            ok = ok && c.exact && c.config["computed_at_R_plus_5"] == c.computed;
            values.insert(c.computed);
        }
    }
    for (const char* v : {"1", "0", "1/2", "1/6"}) ok = ok && values.count(v);
    double t = seconds_since(t0);
    ok = ok && t <= 600;
    std::string seen;
    for (const auto& v : values) seen += v + " ";
    return {ok, std::to_string(total) + " cases, exact and stable at R+5, values { " + seen + "}, " + std::to_string(t) + " s (limit 600)"};
}

Outcome euler_probe() {
    MonteCarloConfig mc;
    long N = 5, R = 10;
    int nonempty = 0, empty = 0, bad = 0, probes = 0;
    for (const char* type : {"A1", "A2"}) {
        auto rs = build_root_system(type);
        auto A = Arrangement::full(rs);
        Facet base = A->facet_of_point(zero_vec(rs->rank));
        auto near = build_BR(*A, base, 2);
        ZHarness h(A, N, R, base, mc);
        auto cases = prop16_battery(rs);
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const auto& c = cases[i];
            if (!in_XN_of_levi(*c.AM, c.F_M, N)) continue;
            if (c.AM->is_full && !near.contains(*rs, c.AM->barycenter(c.F_M))) continue;
            auto res = euler_convexity_probe(make_probe_setup(A, c, N, R), h.over_closure(*c.AM, c.F_M), 0xC0FFEE + i, 200, mc);
            ++probes;
            for (const auto& cell : res.cells) {
                if (cell.nonempty) {
                    ++nonempty;
                    if (cell.euler != 1 || !cell.convex || (cell.members > 0 && cell.convexity_samples < 200)) ++bad;
                } else {
                    ++empty;
                    if (cell.euler != 0) ++bad;
                }
            }
        }
    }
    return {bad == 0 && nonempty > 0 && empty > 0,
            std::to_string(probes) + " probes, " + std::to_string(nonempty) + " nonempty cells, " + std::to_string(empty) + " empty cells, " + std::to_string(bad) + " bad"};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"finite-group identities (1), (2), (5) on class deltas", finite_identities},
        {"cuspidal projection idempotent with cuspidal image", cuspidal_projection},
        {"parabolic induction independent of the parabolic", induction_independence},
        {"partition of unity", unity_partition},
        {"sign identity on B_10", sign_identity},
        {"fixed-face bijection, fixed preimage, open-preimage equivalence", bijections_and_lemmas},
        {"X_N stratification", stratification},
        {"cancellation values at N = 5, R = 40", cancellation},
        {"Euler characteristic and convexity probe", euler_probe},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %zu: %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
