#pragma once

#include "levelzero/finclass.hpp"
#include "levelzero/quotient.hpp"
#include "levelzero/zcancel.hpp"

#include "json.hpp"

#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace levelzero {

inline constexpr int kSchemaVersion = 1;

/// Bad user input (unknown suite, group or type, out-of-range parameters).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** One verified instance: what was computed against what was predicted. */
struct CheckRecord {
    nlohmann::ordered_json config;
    std::string computed;
    std::string predicted;
    bool exact = true;
    double tolerance = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["config"] = config;
        j["computed"] = computed;
        j["predicted"] = predicted;
        j["exact"] = exact;
        j["tolerance"] = tolerance;
        j["samples"] = samples;
        j["seed"] = seed;
        j["pass"] = pass;
        return j;
    }
};

struct SuiteReport {
    std::string suite;
    nlohmann::ordered_json parameters;
    std::vector<CheckRecord> checks;

    long failures() const {
        long f = 0;
        for (const auto& c : checks) f += !c.pass;
        return f;
    }
    bool pass() const { return failures() == 0; }
    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["parameters"] = parameters;
        j["total"] = checks.size();
        j["failures"] = failures();
        j["pass"] = pass();
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) j["checks"].push_back(c.to_json());
        return j;
    }
};

inline std::string values_str(const std::vector<Rational>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
    return s + ")";
}

inline std::string comp_str(const std::vector<int>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
    return s;
}

inline CheckRecord quantity_record(nlohmann::ordered_json config, const Quantity& computed, const Quantity& predicted, double tol) {
    CheckRecord r;
    r.config = std::move(config);
    r.computed = computed.str();
    r.predicted = predicted.str();
    r.exact = computed.is_exact && predicted.is_exact;
    r.tolerance = r.exact ? 0 : tol;
    r.samples = computed.samples + predicted.samples;
    r.seed = computed.seed ? computed.seed : predicted.seed;
    r.pass = computed.matches(predicted, tol);
    return r;
}

inline CheckRecord bool_record(nlohmann::ordered_json config, bool ok, const std::string& what = "true") {
    CheckRecord r;
    r.config = std::move(config);
    r.computed = ok ? what : "not " + what;
    r.predicted = what;
    r.pass = ok;
    return r;
}

// ---------------------------------------------------------------------------
// Finite groups.

struct GroupSpec {
    std::string name;
    bool torus = false;
    int n = 0, q = 0;
    std::vector<int> perm;
};

/// gl<n>q<q>, or torus<n>q<q>[cycle|swap] for a torus twisted by an n-cycle or a transposition.
inline GroupSpec parse_group(const std::string& s) {
    static const std::regex gl(R"(gl(\d+)q(\d+))"), torus(R"(torus(\d+)q(\d+)(cycle|swap)?)");
    std::smatch m;
    GroupSpec g;
    g.name = s;
    if (std::regex_match(s, m, gl)) {
        g.n = std::stoi(m[1]);
        g.q = std::stoi(m[2]);
        if (g.n < 1 || g.n > 3) throw UsageError("group " + s + ": n must be between 1 and 3");
        if (!is_prime(g.q)) throw UsageError("group " + s + ": q must be prime");
        if (gl_order(g.n, g.q) > 20000) throw UsageError("group " + s + ": order exceeds 20000");
        return g;
    }
    if (std::regex_match(s, m, torus)) {
        g.torus = true;
        g.n = std::stoi(m[1]);
        g.q = std::stoi(m[2]);
        if (g.n < 1 || g.n > 4) throw UsageError("group " + s + ": n must be between 1 and 4");
        if (!is_prime(g.q)) throw UsageError("group " + s + ": q must be prime");
        g.perm.resize(g.n);
        std::iota(g.perm.begin(), g.perm.end(), 0);
        if (m[3] == "cycle")
            for (int i = 0; i < g.n; ++i) g.perm[i] = (i + 1) % g.n;
        else if (m[3] == "swap") {
            if (g.n < 2) throw UsageError("group " + s + ": a transposition needs n ≥ 2");
            std::swap(g.perm[0], g.perm[1]);
        }
        return g;
    }
    throw UsageError("unknown group '" + s + "' (expected gl<n>q<q> or torus<n>q<q>[cycle|swap])");
}

inline std::pair<std::shared_ptr<GroupFamily>, SpacePtr> make_group(const GroupSpec& g, const std::optional<std::filesystem::path>& cache) {
    if (g.torus) {
        auto fam = build_twisted_torus(g.n, g.q, g.perm);
        return {fam, fam->space(std::vector<int>(g.n, 1))};
    }
    auto fam = build_gl(g.n, g.q, cache);
    return {fam, fam->space({g.n})};
}

inline std::vector<std::string> default_s2_groups() {
    std::vector<std::string> out{"gl2q2", "gl2q3", "gl2q5", "gl3q2"};
    for (int q : {3, 5})
        for (int n = 1; n <= 3; ++n) {
            out.push_back("torus" + std::to_string(n) + "q" + std::to_string(q) + "cycle");
            if (n >= 2) out.push_back("torus" + std::to_string(n) + "q" + std::to_string(q) + "swap");
        }
    return out;
}

/// Weight systems used for identity (5): uniform, and on GL3 a skewed one.
inline std::vector<std::pair<std::string, ParabolicWeights>> weight_systems(const Space& G) {
    std::vector<std::pair<std::string, ParabolicWeights>> out{{"uniform", uniform_weights(G)}};
    if (!G.twisted() && G.lambda == std::vector<int>{3}) {
        auto z = uniform_weights(G);
        z[{2, 1}] = Rational(1, 3);
        z[{1, 2}] = Rational(2, 3);
        out.push_back({"skewed", z});
    }
    return out;
}

inline SuiteReport run_s2(const std::vector<std::string>& groups, const std::optional<std::filesystem::path>& cache) {
    SuiteReport rep;
    rep.suite = "s2";
    rep.parameters["groups"] = groups;
    for (const auto& name : groups) {
        auto [fam, G] = make_group(parse_group(name), cache);
        auto zs = weight_systems(*G);
        for (int k = 0; k < G->nclasses(); ++k) {
            auto f = class_delta(G, k);
            auto base = [&](const std::string& id) {
                nlohmann::ordered_json c;
                c["group"] = name;
                c["class"] = k;
                c["identity"] = id;
                return c;
            };
            auto rhs1 = identity1_rhs(*fam, f);
            CheckRecord r1;
            r1.config = base("1");
            r1.computed = values_str(rhs1.values);
            r1.predicted = values_str(f.values);
            r1.pass = rhs1 == f;
            rep.checks.push_back(r1);
            for (const auto& L : standard_compositions(*G)) {
                auto [lhs, rhs] = identity2_sides(*fam, f, L);
                CheckRecord r;
                r.config = base("2");
                r.config["levi"] = comp_str(L);
                r.computed = values_str(rhs.values);
                r.predicted = values_str(lhs.values);
                r.pass = lhs == rhs;
                rep.checks.push_back(r);
            }
            for (const auto& [zn, z] : zs) {
                auto rhs5 = identity5_rhs(*fam, f, z);
                CheckRecord r;
                r.config = base("5");
                r.config["weights"] = zn;
                r.computed = values_str(rhs5.values);
                r.predicted = values_str(f.values);
                r.pass = rhs5 == f;
                rep.checks.push_back(r);
            }
        }
    }
    return rep;
}

/// Sign character of GL2(F2) ≅ S3 on classes of orders (1, 2, 3).
inline ClassFunction gl2q2_sign(const SpacePtr& G) { return {G, {Rational(1), Rational(-1), Rational(1)}}; }

inline SuiteReport run_cusp(const std::vector<std::string>& groups, const std::optional<std::filesystem::path>& cache) {
    SuiteReport rep;
    rep.suite = "cusp";
    rep.parameters["groups"] = groups;
    for (const auto& name : groups) {
        auto spec = parse_group(name);
        auto [fam, G] = make_group(spec, cache);
        for (int k = 0; k < G->nclasses(); ++k) {
            auto p = proj_cusp(*fam, class_delta(G, k));
            auto pp = proj_cusp(*fam, p);
            nlohmann::ordered_json c;
            c["group"] = name;
            c["class"] = k;
            c["property"] = "idempotent";
            CheckRecord r;
            r.config = c;
            r.computed = values_str(pp.values);
            r.predicted = values_str(p.values);
            r.pass = pp == p;
            rep.checks.push_back(r);
            c["property"] = "cuspidal";
            rep.checks.push_back(bool_record(c, is_cuspidal(*fam, p), "cuspidal"));
        }
        if (!spec.torus && spec.n == 2 && spec.q == 2) {
            auto p = proj_cusp(*fam, constant_function(G, 1));
            CheckRecord r;
            r.config = {{"group", name}, {"function", "trivial"}};
            r.computed = values_str(p.values);
            r.predicted = values_str({Rational(-1, 2), Rational(1, 2), Rational(1)});
            r.pass = r.computed == r.predicted;
            rep.checks.push_back(r);
            auto sgn = gl2q2_sign(G);
            auto ps = proj_cusp(*fam, sgn);
            CheckRecord s;
            s.config = {{"group", name}, {"function", "sign"}};
            s.computed = values_str(ps.values);
            s.predicted = values_str(sgn.values);
            s.pass = ps == sgn;
            rep.checks.push_back(s);
        }
    }
    return rep;
}

inline SuiteReport run_ind(const std::vector<std::string>& groups, const std::optional<std::filesystem::path>& cache) {
    SuiteReport rep;
    rep.suite = "ind";
    rep.parameters["groups"] = groups;
    for (const auto& name : groups) {
        auto [fam, G] = make_group(parse_group(name), cache);
        for (const auto& mu : standard_compositions(*G)) {
            auto M = fam->space(mu);
            for (int k = 0; k < M->nclasses(); ++k) {
                auto f = class_delta(M, k);
                auto a = ind_parabolic(*fam, f, G, {mu, false});
                auto b = ind_parabolic(*fam, f, G, {mu, true});
                CheckRecord r;
                r.config = {{"group", name}, {"levi", comp_str(mu)}, {"class", k}};
                r.computed = values_str(b.values);
                r.predicted = values_str(a.values);
                r.pass = a == b;
                rep.checks.push_back(r);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Apartments.

inline RootSystemPtr parse_type(const std::string& t) {
    try {
        return build_root_system(t);
    } catch (const std::exception& e) {
        throw UsageError("unsupported type '" + t + "': " + e.what());
    }
}

inline Facet origin_facet(const Arrangement& A) { return A.facet_of_point(zero_vec(A.rs->rank)); }

/// Partition of unity around every facet of B_R (rank ≤ 2) or around the origin vertex (rank ≥ 3).
inline SuiteReport run_partition(const std::vector<std::string>& types, long R, const MonteCarloConfig& mc) {
    SuiteReport rep;
    rep.suite = "partition";
    rep.parameters["types"] = types;
    rep.parameters["R"] = R;
    double tol = 5e-3;
    for (const auto& t : types) {
        auto rs = parse_type(t);
        auto A = Arrangement::full(rs);
        std::vector<std::pair<Facet, ApartmentAutomorphism>> cases;
        if (rs->rank <= 2) {
            for (const auto& rec : enumerate_facets(*A, build_BR(*A, origin_facet(*A), R)))
                for (const auto& s : stabilizer_battery(*A, rec.facet, root_automorphisms(*rs))) cases.push_back({rec.facet, s});
        } else {
            ApartmentAutomorphism id{Mat::identity(rs->rank), zero_vec(rs->rank), true, "id"};
            cases.push_back({origin_facet(*A), id});
        }
        for (const auto& [F, s] : cases)
            for (const auto& g : partition_of_unity(*A, F, s.as_map(), mc)) {
                nlohmann::ordered_json c;
                c["type"] = t;
                c["facet"] = facet_label(F);
                c["sigma"] = s.label;
                c["fixed_dim"] = g.fixed_space.size();
                c["facets"] = g.facets.size();
                rep.checks.push_back(quantity_record(c, g.sum, Quantity::of(1), tol));
            }
    }
    return rep;
}

/// Facets of B_R around the origin with every stabilizing root automorphism.
inline std::vector<std::pair<FacetRecord, ApartmentAutomorphism>> twist_battery(const Arrangement& A, long R) {
    std::vector<std::pair<FacetRecord, ApartmentAutomorphism>> out;
    auto auts = root_automorphisms(*A.rs);
    for (const auto& rec : enumerate_facets(A, build_BR(A, origin_facet(A), R)))
        for (const auto& s : stabilizer_battery(A, rec.facet, auts)) out.push_back({rec, s});
    return out;
}

inline SuiteReport run_sign(const std::vector<std::string>& types, long R) {
    SuiteReport rep;
    rep.suite = "sign";
    rep.parameters["types"] = types;
    rep.parameters["R"] = R;
    for (const auto& t : types) {
        auto rs = parse_type(t);
        auto A = Arrangement::full(rs);
        for (const auto& [rec, s] : twist_battery(*A, R)) {
            auto m = s.as_map();
            Rational d = direction_determinant(*A, rec.facet, m);
            int dimF = rec.dim, dimFix = A->fixed_facet(rec.facet, m).dimension;
            CheckRecord r;
            r.config = {{"type", t}, {"facet", facet_label(rec.facet)}, {"sigma", s.label}};
            int lhs = (d > 0 ? 1 : -1) * (dimF % 2 ? -1 : 1);
            r.computed = std::to_string(lhs);
            r.predicted = std::to_string(dimFix % 2 ? -1 : 1);
            r.pass = sign_identity_check(*A, rec.facet, m) && r.computed == r.predicted;
            rep.checks.push_back(r);
        }
    }
    return rep;
}

/// Levis M ⊇ M_{F,ν} on whose 𝒜_M the linear part acts trivially.
inline std::vector<LeviSubset> descent_levis(const RootSystem& rs, const LeviSubset& Mnu, const Mat& L) {
    std::vector<LeviSubset> out;
    for (const auto& M : levi_lattice(rs)) {
        if (!M.contains(Mnu)) continue;
        bool trivial = true;
        for (const auto& v : M.subspace_basis)
            if (L * v != v) trivial = false;
        if (trivial) out.push_back(M);
    }
    return out;
}

/**
 * Fixed-face bijection and Lemma 6(vi) on the twist battery; Lemma 7 (a)⇔(c)
 * for every F in B_R against each Levi M, every M-facet adjacent to F^M, and
 * every W^M stabilizer of that M-facet.
 */
inline SuiteReport run_bijection(const std::vector<std::string>& types, long R) {
    SuiteReport rep;
    rep.suite = "bijection";
    rep.parameters["types"] = types;
    rep.parameters["R"] = R;
    for (const auto& t : types) {
        auto rs = parse_type(t);
        auto A = Arrangement::full(rs);
        std::map<std::string, ArrangementPtr> levi_arr;
        auto arr_of = [&](const LeviSubset& M) {
            auto key = comp_str(M.roots);
            auto it = levi_arr.find(key);
            if (it != levi_arr.end()) return it->second;
            return levi_arr[key] = Arrangement::of_levi(rs, M);
        };
        for (const auto& [rec, s] : twist_battery(*A, R)) {
            auto m = s.as_map();
            nlohmann::ordered_json c{{"type", t}, {"facet", facet_label(rec.facet)}, {"sigma", s.label}, {"property", "fixed_face_bijection"}};
            rep.checks.push_back(bool_record(c, fixed_face_bijection(*A, rec.facet, m), "bijective"));
            auto Mnu = levi_of_twisted_facet(*A, rec.facet, m);
            for (const auto& M : descent_levis(*rs, Mnu, s.L)) {
                c["property"] = "fixed_preimage";
                c["levi"] = comp_str(M.roots);
                rep.checks.push_back(bool_record(c, fixed_preimage_check(*A, rec.facet, *arr_of(M), m), "equal and open"));
            }
        }
        // Lemma 7.
        auto facets = enumerate_facets(*A, build_BR(*A, origin_facet(*A), R));
        for (const auto& M : levi_lattice(*rs)) {
            auto AM = arr_of(M);
            auto WM = levi_weyl_group(*rs, M);
            std::set<Facet> projected;
            for (const auto& rec : facets) projected.insert(project_facet(*A, rec.facet, *AM));
            std::map<Facet, std::vector<ApartmentAutomorphism>> stab;
            for (const auto& FM : projected) stab[FM] = stabilizer_battery(*AM, FM, WM);
            long total = 0, agree = 0, positive = 0;
            for (const auto& rec : facets) {
                Facet FMp = project_facet(*A, rec.facet, *AM);
                for (const auto& FM : projected) {
                    if (!(FM == FMp || AM->closure_contains(FM, FMp) || AM->closure_contains(FMp, FM))) continue;
                    for (const auto& s : stab[FM]) {
                        bool a = lemma7_open_condition(*A, rec.facet, *AM, FM, s);
                        bool cc = lemma7_class(*A, rec.facet, *AM, FM, s);
                        ++total;
                        agree += a == cc;
                        positive += cc;
                    }
                }
            }
            CheckRecord r;
            r.config = {{"type", t}, {"levi", comp_str(M.roots)}, {"property", "open_condition_iff_class"}, {"triples", total}, {"class_true", positive}};
            r.computed = std::to_string(agree) + "/" + std::to_string(total) + " agree";
            r.predicted = std::to_string(total) + "/" + std::to_string(total) + " agree";
            r.pass = agree == total;
            rep.checks.push_back(r);
        }
    }
    return rep;
}

/// All parabolics Q with y ∈ X'_N(Q) that contain no smaller such Q.
inline std::vector<ParabolicSubset> minimal_XN_prime(const RootSystem& rs, const std::vector<ParabolicSubset>& all, const Vec& y, long N) {
    std::vector<ParabolicSubset> in;
    for (const auto& P : all)
        if (in_XN_prime(rs, P, y, N)) in.push_back(P);
    std::vector<ParabolicSubset> out;
    for (const auto& P : in) {
        bool minimal = true;
        for (const auto& Q : in)
            if (!(Q == P) && P.contains(Q)) minimal = false;
        if (minimal) out.push_back(P);
    }
    return out;
}

inline SuiteReport run_strat(const std::vector<std::string>& types, long N, int samples, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = "strat";
    rep.parameters["types"] = types;
    rep.parameters["N"] = N;
    rep.parameters["samples"] = samples;
    rep.parameters["seed"] = seed;
    for (const auto& t : types) {
        auto rs = parse_type(t);
        auto A = Arrangement::full(rs);
        auto all = all_parabolics(*rs);
        long bound = XN_box_bound(*rs, N);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long> den(1, 6);
        int unique = 0;
        for (int i = 0; i < samples; ++i) {
            Vec y(rs->rank);
            for (auto& c : y) {
                long d = den(rng);
                std::uniform_int_distribution<long> num(-(bound + 3) * d, (bound + 3) * d);
                c = Rational(num(rng), d);
                c.canonicalize();
            }
            auto mins = minimal_XN_prime(*rs, all, y, N);
            unique += mins.size() == 1 && mins[0] == classify_XN(*rs, y, N);
        }
        CheckRecord r;
        r.config = {{"type", t}, {"property", "unique_minimal_parabolic"}};
        r.computed = std::to_string(unique) + "/" + std::to_string(samples);
        r.predicted = std::to_string(samples) + "/" + std::to_string(samples);
        r.samples = samples;
        r.seed = seed;
        r.pass = unique == samples;
        rep.checks.push_back(r);
        if (rs->rank > 2) continue;
        // Facets of a window containing X_N(G) and a margin.
        auto facets = enumerate_facets(*A, build_BR(*A, origin_facet(*A), bound + 2));
        long once = 0, constant = 0, boxed = 0, core = 0;
        for (const auto& rec : facets) {
            int hits = 0;
            ParabolicSubset which;
            for (const auto& P : all) {
                if (!in_XN_prime(*rs, P, rec.barycenter, N)) continue;
                bool smaller = false;
                for (const auto& Q : all)
                    if (!(Q == P) && P.contains(Q) && in_XN_prime(*rs, Q, rec.barycenter, N)) smaller = true;
                if (!smaller) {
                    ++hits;
                    which = P;
                }
            }
            once += hits == 1;
            // The stratum is constant on the facet: check midpoints of barycenter and each vertex.
            bool same = true;
            for (const auto& v : A->vertices(rec.facet)) {
                Vec p = scale(Rational(1, 2), add(v, rec.barycenter));
                if (!(classify_XN(*rs, p, N) == which)) same = false;
            }
            constant += same;
            if (which.positive_part.empty()) {
                ++core;
                bool in = true;
                for (const auto& v : A->vertices(rec.facet))
                    for (int b = 0; b < rs->npos; ++b) {
                        Rational x = rs->eval(b, v);
                        if (x > bound || x < -bound) in = false;
                    }
                boxed += in;
            }
        }
        auto count_rec = [&](const std::string& prop, long got, long want) {
            CheckRecord c;
            c.config = {{"type", t}, {"property", prop}, {"window", bound + 2}};
            c.computed = std::to_string(got) + "/" + std::to_string(want);
            c.predicted = std::to_string(want) + "/" + std::to_string(want);
            c.pass = got == want;
            rep.checks.push_back(c);
        };
        count_rec("exactly_one_stratum", once, static_cast<long>(facets.size()));
        count_rec("stratum_constant_on_facet", constant, static_cast<long>(facets.size()));
        count_rec("core_inside_box", boxed, core);
    }
    return rep;
}

inline nlohmann::ordered_json prop16_config(const std::string& type, const Prop16Case& c, long N, long R) {
    nlohmann::ordered_json j;
    j["type"] = type;
    j["case"] = c.label;
    j["N"] = N;
    j["R"] = R;
    return j;
}

inline SuiteReport run_prop16(const std::string& type, long N, long R, const MonteCarloConfig& mc) {
    SuiteReport rep;
    rep.suite = "prop16";
    rep.parameters["type"] = type;
    rep.parameters["N"] = N;
    rep.parameters["R"] = R;
    auto rs = parse_type(type);
    if (rs->rank > 2) throw UsageError("prop16 runs on rank ≤ 2 types");
    if (N < 1 || R < 1) throw UsageError("prop16 needs N ≥ 1 and R ≥ 1");
    auto cases = prop16_battery(rs);
    for (const auto& res : prop16_verify(rs, cases, N, R, mc)) {
        auto c = quantity_record(prop16_config(type, res.config, N, R), res.computed, res.predicted, 5e-3);
        c.config["in_XN"] = res.in_XN;
        c.config["fixed_point"] = res.fixed_point;
        c.config["computed_at_R_plus_5"] = res.computed_next.str();
        c.pass = res.pass;
        rep.checks.push_back(c);
    }
    return rep;
}

/// Euler probe over the Prop16 battery; scope "near" keeps M ≠ G plus the M = G facets inside B_2.
inline SuiteReport run_euler(const std::string& type, long N, long R, const std::string& scope, std::uint64_t seed, const MonteCarloConfig& mc) {
    if (scope != "near" && scope != "all") throw UsageError("euler scope must be 'near' or 'all'");
    SuiteReport rep;
    rep.suite = "euler";
    rep.parameters["type"] = type;
    rep.parameters["N"] = N;
    rep.parameters["R"] = R;
    rep.parameters["scope"] = scope;
    rep.parameters["seed"] = seed;
    auto rs = parse_type(type);
    if (rs->rank > 2) throw UsageError("euler runs on rank ≤ 2 types");
    auto A = Arrangement::full(rs);
    auto near = build_BR(*A, origin_facet(*A), 2);
    ZHarness h(A, N, R, origin_facet(*A), mc);
    auto cases = prop16_battery(rs);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        if (!in_XN_of_levi(*c.AM, c.F_M, N)) continue;
        if (scope == "near" && c.AM->is_full && !near.contains(*rs, c.AM->barycenter(c.F_M))) continue;
        auto S = make_probe_setup(A, c, N, R);
        auto res = euler_convexity_probe(S, h.over_closure(*c.AM, c.F_M), seed + i, 200, mc);
        int nonempty = 0, samples = 0;
        for (const auto& cell : res.cells) {
            nonempty += cell.nonempty;
            samples += cell.convexity_samples;
        }
        CheckRecord r;
        r.config = prop16_config(type, c, N, R);
        r.config["cells"] = res.cells.size();
        r.config["nonempty_cells"] = nonempty;
        r.computed = res.pass ? "all cells consistent" : "inconsistent cell";
        r.predicted = "all cells consistent";
        r.samples = samples;
        r.seed = seed + i;
        r.pass = res.pass;
        rep.checks.push_back(r);
        auto z = h.z_NR(c.P, *c.AM, c.F_M, c.sigma);
        auto d = quantity_record(prop16_config(type, c, N, R), res.decomposition, z, 5e-3);
        d.config["property"] = "cell_decomposition_equals_z";
        rep.checks.push_back(d);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Facet listings.

inline nlohmann::ordered_json facet_json(const Arrangement& A, const Facet& F) {
    nlohmann::ordered_json j;
    j["type"] = A.rs->cartan_type;
    j["constraints"] = nlohmann::ordered_json::array();
    for (int i = 0; i < A.nroots(); ++i) {
        long k = F.code[i];
        nlohmann::ordered_json c;
        c["root_index"] = i;
        c["kind"] = Facet::is_eq(k) ? "eq" : "open";
        c["c"] = Facet::floor_part(k);
        j["constraints"].push_back(c);
    }
    j["dim"] = A.facet_dim(F);
    j["barycenter"] = nlohmann::ordered_json::array();
    for (const auto& x : A.barycenter(F)) j["barycenter"].push_back(x.get_str());
    return j;
}

}  // namespace levelzero
