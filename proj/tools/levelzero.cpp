// Command-line front end: verification suites, facet listings, class-function
// operations and cache maintenance. Exit codes: 0 pass, 1 failure, 2 usage.

#include "levelzero/suites.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <regex>
#include <iostream>

using namespace levelzero;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::filesystem::path resolve_cache_dir(const std::string& flag) { return flag.empty() ? default_cache_dir() : std::filesystem::path(flag); }

void emit(const ojson& j, const std::string& output) {
    std::string text = j.dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out) throw UsageError("cannot write " + output);
    out << text;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ','))
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

struct VerifyOptions {
    std::vector<std::string> suites;
    std::vector<std::string> groups;
    std::vector<std::string> types;
    long N = 5;
    std::optional<long> R;
    std::uint64_t seed = 0xC0FFEE;
    long mc_samples = 2'000'000;
    int points = 1000;
    std::string scope = "near";
    std::string output;
    std::string cache_dir;
};

const std::vector<std::string> kSuites{"s2", "cusp", "ind", "partition", "sign", "bijection", "strat", "prop16", "euler"};

std::vector<std::string> default_types(const std::string& suite) {
    if (suite == "partition") return {"A1", "A2", "B2", "A3"};
    if (suite == "sign" || suite == "bijection") return {"A1", "A2", "A1xA1"};
    if (suite == "strat") return {"A1", "A2", "B2", "G2", "A1xA1", "A3"};
    return {"A1", "A2"};
}

long default_R(const std::string& suite) {
    if (suite == "partition") return 2;
    if (suite == "prop16") return 40;
    return 10;
}

ojson verify_config_json(const VerifyOptions& o) {
    ojson c;
    c["suites"] = o.suites;
    c["groups"] = o.groups;
    c["types"] = o.types;
    c["N"] = o.N;
    c["R"] = o.R ? ojson(*o.R) : ojson(nullptr);
    c["seed"] = o.seed;
    c["mc_samples"] = o.mc_samples;
    c["points"] = o.points;
    c["scope"] = o.scope;
    return c;
}

int cmd_verify(VerifyOptions o) {
    o.suites = split_list(o.suites);
    o.groups = split_list(o.groups);
    o.types = split_list(o.types);
    if (o.suites.empty()) throw UsageError("verify: --suite is required");
    if (o.suites.size() == 1 && o.suites[0] == "all") o.suites = kSuites;
    for (const auto& s : o.suites)
        if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) throw UsageError("unknown suite '" + s + "'");
    if (o.N < 1) throw UsageError("--N must be positive");
    if (o.R && *o.R < 1) throw UsageError("--R must be positive");
    if (o.mc_samples < 1 || o.points < 1) throw UsageError("sample counts must be positive");
    // Validate groups and types before running anything.
    for (const auto& g : o.groups) parse_group(g);
    for (const auto& t : o.types) parse_type(t);

    MonteCarloConfig mc;
    mc.samples = o.mc_samples;
    mc.seed = o.seed;
    auto cache = std::optional<std::filesystem::path>(resolve_cache_dir(o.cache_dir));
    auto groups = o.groups.empty() ? default_s2_groups() : o.groups;

    ojson report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "verify";
    report["config"] = verify_config_json(o);
    report["suites"] = ojson::array();
    bool all_pass = true;
    for (const auto& s : o.suites) {
        auto types = o.types.empty() ? default_types(s) : o.types;
        long R = o.R.value_or(default_R(s));
        std::vector<SuiteReport> reps;
        if (s == "s2") reps.push_back(run_s2(groups, cache));
        else if (s == "cusp") reps.push_back(run_cusp(groups, cache));
        else if (s == "ind") reps.push_back(run_ind(groups, cache));
        else if (s == "partition") reps.push_back(run_partition(types, R, mc));
        else if (s == "sign") reps.push_back(run_sign(types, R));
        else if (s == "bijection") reps.push_back(run_bijection(types, R));
        else if (s == "strat") reps.push_back(run_strat(types, o.N, o.points, o.seed));
        else if (s == "prop16")
            for (const auto& t : types) reps.push_back(run_prop16(t, o.N, R, mc));
        else if (s == "euler")
            for (const auto& t : types) reps.push_back(run_euler(t, o.N, R, o.scope, o.seed, mc));
        for (const auto& r : reps) {
            std::cerr << "suite " << r.suite << ": " << r.checks.size() << " checks, " << r.failures() << " failures\n";
            all_pass = all_pass && r.pass();
            report["suites"].push_back(r.to_json());
        }
    }
    report["pass"] = all_pass;
    emit(report, o.output);
    std::cerr << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? kExitPass : kExitFail;
}

struct FacetsOptions {
    std::string type = "A1";
    long R = 2;
    std::string output;
};

int cmd_facets(const FacetsOptions& o) {
    if (o.R < 1) throw UsageError("--R must be positive (the region must be bounded)");
    auto rs = parse_type(o.type);
    auto A = Arrangement::full(rs);
    auto facets = enumerate_facets(*A, build_BR(*A, origin_facet(*A), o.R));
    auto auts = root_automorphisms(*rs);
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "facets";
    j["config"] = {{"type", o.type}, {"R", o.R}};
    j["count"] = facets.size();
    std::map<int, long> by_dim;
    for (const auto& rec : facets) ++by_dim[rec.dim];
    j["counts_by_dim"] = ojson::object();
    for (const auto& [d, n] : by_dim) j["counts_by_dim"][std::to_string(d)] = n;
    j["facets"] = ojson::array();
    for (const auto& rec : facets) {
        auto f = facet_json(*A, rec.facet);
        f["levi"] = levi_of_facet(*A, rec.facet).roots;
        f["stabilizers"] = ojson::array();
        for (const auto& s : stabilizer_battery(*A, rec.facet, auts)) {
            auto X = A->fixed_facet(rec.facet, s.as_map());
            f["stabilizers"].push_back({{"sigma", s.label}, {"fixed_dim", X.dimension}, {"levi", levi_of_twisted_facet(*A, rec.facet, s.as_map()).roots}});
        }
        j["facets"].push_back(f);
    }
    emit(j, o.output);
    std::cerr << o.type << " R=" << o.R << ": " << facets.size() << " facets\n";
    return kExitPass;
}

struct ClassfunOptions {
    std::string group = "gl2q2";
    std::string op = "proj_cusp";
    std::string function;
    std::string input;
    std::string levi;
    bool opposite = false;
    std::string output;
    std::string cache_dir;
};

std::vector<int> parse_composition(const std::string& s) {
    std::vector<int> out;
    for (const auto& p : split_list({s})) {
        try {
            out.push_back(std::stoi(p));
        } catch (const std::exception&) {
            throw UsageError("bad composition '" + s + "'");
        }
    }
    return out;
}

ojson classes_json(GroupFamily& fam, const Space& S) {
    (void)fam;
    ojson arr = ojson::array();
    for (int c = 0; c < S.nclasses(); ++c) {
        long rep = S.rep(c);
        long id = S.F->identity(), p = rep;
        int order = 1;
        while (p != id) {
            p = S.F->mul(p, rep);
            ++order;
        }
        arr.push_back({{"index", c}, {"size", S.classes[c].size()}, {"order", order}, {"representative", rep}});
    }
    return arr;
}

ojson function_json(GroupFamily& fam, const ClassFunction& f) {
    ojson j;
    j["composition"] = f.space->lambda;
    j["values"] = ojson::array();
    for (const auto& v : f.values) j["values"].push_back(v.get_str());
    j["classes"] = classes_json(fam, *f.space);
    return j;
}

Rational json_rational(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw UsageError("values must be integers or rational strings like \"-1/2\"");
}

/// Input function on `S`: named (trivial, sign, delta:K) or JSON with class_values or element_values.
ClassFunction read_function(const ClassfunOptions& o, const SpacePtr& S, bool is_gl2q2) {
    if (!o.function.empty()) {
        if (o.function == "trivial") return constant_function(S, 1);
        if (o.function == "sign") {
            if (!is_gl2q2 || S->lambda != std::vector<int>{2}) throw UsageError("the sign function is available on gl2q2 only");
            return gl2q2_sign(S);
        }
        if (o.function.rfind("delta:", 0) == 0) {
            int k = std::stoi(o.function.substr(6));
            if (k < 0 || k >= S->nclasses()) throw UsageError("class index out of range");
            return class_delta(S, k);
        }
        throw UsageError("unknown function '" + o.function + "'");
    }
    if (o.input.empty()) throw UsageError("classfun needs --function or --input");
    nlohmann::json j;
    try {
        if (o.input == "-") {
            j = nlohmann::json::parse(std::cin);
        } else {
            std::ifstream in(o.input);
            if (!in) throw UsageError("cannot read " + o.input);
            j = nlohmann::json::parse(in);
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed JSON input: ") + e.what());
    }
    if (j.contains("class_values")) {
        const auto& v = j["class_values"];
        if (!v.is_array() || static_cast<int>(v.size()) != S->nclasses()) throw UsageError("class_values must list one value per class");
        ClassFunction f = zero_function(S);
        for (int c = 0; c < S->nclasses(); ++c) f.values[c] = json_rational(v[c]);
        return f;
    }
    if (j.contains("element_values")) {
        // Object keyed by matrix code, or array in increasing code order.
        std::vector<Rational> per(S->order());
        const auto& v = j["element_values"];
        if (v.is_array()) {
            if (static_cast<int>(v.size()) != S->order()) throw UsageError("element_values must list one value per element");
            for (int i = 0; i < S->order(); ++i) per[i] = json_rational(v[i]);
        } else if (v.is_object()) {
            if (static_cast<int>(v.size()) != S->order()) throw UsageError("element_values must cover every element");
            for (auto it = v.begin(); it != v.end(); ++it) {
                int i = S->idx(std::stol(it.key()));
                if (i < 0) throw UsageError("element code " + it.key() + " is not in the group");
                per[i] = json_rational(it.value());
            }
        } else {
            throw UsageError("element_values must be an array or an object");
        }
        auto f = class_function_from_elements(S, per);
        if (!f) throw UsageError("input function is not constant on conjugacy classes");
        return *f;
    }
    throw UsageError("input JSON needs class_values or element_values");
}

int cmd_classfun(const ClassfunOptions& o) {
    auto spec = parse_group(o.group);
    auto [fam, G] = make_group(spec, resolve_cache_dir(o.cache_dir));
    bool is_gl2q2 = !spec.torus && spec.n == 2 && spec.q == 2;
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "classfun";
    j["config"] = {{"group", o.group}, {"op", o.op}, {"levi", o.levi}, {"opposite", o.opposite}};
    auto levi = o.levi.empty() ? G->lambda : parse_composition(o.levi);
    if (!refines(levi, G->lambda)) throw UsageError("--levi must refine the group's block structure");
    if (G->twisted() && levi != G->lambda) throw UsageError("twisted spaces have no proper θ-stable Levi");
    if (o.op == "proj_cusp" || o.op == "is_cuspidal" || o.op == "res" || o.op == "describe") {
        auto f = o.op == "describe" ? constant_function(G, 1) : read_function(o, G, is_gl2q2);
        j["input"] = function_json(*fam, f);
        if (o.op == "proj_cusp") {
            auto p = proj_cusp(*fam, f);
            j["result"] = function_json(*fam, p);
            j["unchanged"] = p == f;
        } else if (o.op == "is_cuspidal") {
            j["result"] = is_cuspidal(*fam, f);
        } else if (o.op == "res") {
            j["result"] = function_json(*fam, levi == G->lambda ? f : res_parabolic(*fam, f, {levi, o.opposite}));
        } else {
            j.erase("input");
            j["classes"] = classes_json(*fam, *G);
            j["elements"] = G->elements;
        }
    } else if (o.op == "ind") {
        auto M = fam->space(levi);
        auto f = read_function(o, M, false);
        j["input"] = function_json(*fam, f);
        j["result"] = function_json(*fam, ind_parabolic(*fam, f, G, {levi, o.opposite}));
    } else {
        throw UsageError("unknown op '" + o.op + "' (proj_cusp, is_cuspidal, res, ind, describe)");
    }
    emit(j, o.output);
    return kExitPass;
}

int cmd_cache(const std::string& action, const std::string& dir_flag, const std::string& output) {
    auto dir = resolve_cache_dir(dir_flag);
    static const std::regex name(R"(gl_n(\d+)_q(\d+)_v(\d+)\.json)");
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "cache " + action;
    j["directory"] = dir.string();
    j["entries"] = ojson::array();
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(dir))
        for (const auto& e : std::filesystem::directory_iterator(dir))
            if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    long removed = 0;
    for (const auto& f : files) {
        std::smatch m;
        std::string fn = f.filename().string();
        ojson e{{"file", fn}};
        bool valid = false;
        if (std::regex_match(fn, m, name)) {
            int n = std::stoi(m[1]), q = std::stoi(m[2]), v = std::stoi(m[3]);
            e["n"] = n;
            e["q"] = q;
            e["format_version"] = v;
            if (v == kCacheFormatVersion && n >= 1 && n <= 3 && is_prime(q) && gl_order(n, q) <= 20000) {
                auto c = load_cached_classes(f, n, q);
                valid = c.has_value();
                if (c) {
                    e["order"] = c->elements.size();
                    e["classes"] = *std::max_element(c->class_of.begin(), c->class_of.end()) + 1;
                }
            }
        } else if (fn.size() > 4 && fn.substr(fn.size() - 4) == ".tmp") {
            e["stale_temporary"] = true;
        } else {
            continue;  // not ours
        }
        e["valid"] = valid;
        e["bytes"] = std::filesystem::file_size(f);
        if (action == "gc" && !valid) {
            std::filesystem::remove(f);
            e["removed"] = true;
            ++removed;
        }
        j["entries"].push_back(e);
    }
    if (action == "gc") j["removed"] = removed;
    emit(j, output);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of level-zero character combinatorics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Run verification suites and emit a JSON report");
    verify->add_option("--suite", vo.suites, "Suites: s2, cusp, ind, partition, sign, bijection, strat, prop16, euler, or all")->required();
    verify->add_option("--group", vo.groups, "Finite groups: gl<n>q<q> or torus<n>q<q>[cycle|swap]");
    verify->add_option("--type", vo.types, "Root system types: A1, A2, A3, B2, C2, G2, products like A1xA1");
    verify->add_option("--N", vo.N, "Threshold N of the X_N strata");
    verify->add_option("--R", vo.R, "Radius R of the truncation region B_R");
    verify->add_option("--seed", vo.seed, "Seed for Monte Carlo and random sampling");
    verify->add_option("--mc-samples", vo.mc_samples, "Monte Carlo samples per cone of dimension ≥ 3");
    verify->add_option("--points", vo.points, "Random points per type for the strat suite");
    verify->add_option("--scope", vo.scope, "Euler probe scope: near or all");
    verify->add_option("--output,-o", vo.output, "Write the report here instead of standard output");
    verify->add_option("--cache-dir", vo.cache_dir, "Class cache directory (default: $LEVELZERO_CACHE_DIR)");

    FacetsOptions fo;
    auto* facets = app.add_subcommand("facets", "List the facets of B_R around the origin");
    facets->add_option("--type", fo.type, "Root system type")->required();
    facets->add_option("--R", fo.R, "Radius of B_R");
    facets->add_option("--output,-o", fo.output, "Output file");

    ClassfunOptions co;
    auto* classfun = app.add_subcommand("classfun", "Apply res/ind/proj_cusp to a class function");
    classfun->add_option("--group", co.group, "Finite group: gl<n>q<q> or torus<n>q<q>[cycle|swap]");
    classfun->add_option("--op", co.op, "proj_cusp, is_cuspidal, res, ind or describe");
    classfun->add_option("--function", co.function, "Named input: trivial, sign, delta:<class>");
    classfun->add_option("--input", co.input, "JSON file (or - for stdin) with class_values or element_values");
    classfun->add_option("--levi", co.levi, "Levi composition for res/ind, e.g. 1,1");
    classfun->add_flag("--opposite", co.opposite, "Use the opposite parabolic");
    classfun->add_option("--output,-o", co.output, "Output file");
    classfun->add_option("--cache-dir", co.cache_dir, "Class cache directory");

    std::string cache_dir, cache_out;
    auto* cache = app.add_subcommand("cache", "Maintain the conjugacy-class cache");
    cache->require_subcommand(1);
    auto* gc = cache->add_subcommand("gc", "Delete invalid or outdated cache entries");
    auto* inspect = cache->add_subcommand("inspect", "List cache entries");
    cache->add_option("--cache-dir", cache_dir, "Cache directory");
    cache->add_option("--output,-o", cache_out, "Output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify(vo);
        if (*facets) return cmd_facets(fo);
        if (*classfun) return cmd_classfun(co);
        if (*cache) return cmd_cache(*gc ? "gc" : "inspect", cache_dir, cache_out);
        (void)inspect;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
