#pragma once

#include "levelzero/linalg.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace levelzero {

/** Square matrices over a prime field, encoded as base-q integers (row-major). */
class FieldMatrices {
public:
    int n, q;

    FieldMatrices(int n_, int q_) : n(n_), q(q_) {}

    using Entries = std::array<int, 9>;

    Entries decode(long code) const {
        Entries e{};
        for (int i = 0; i < n * n; ++i) {
            e[i] = static_cast<int>(code % q);
            code /= q;
        }
        return e;
    }
    long encode(const Entries& e) const {
        long c = 0;
        for (int i = n * n - 1; i >= 0; --i) c = c * q + e[i];
        return c;
    }
    long mul(long a, long b) const {
        Entries x = decode(a), y = decode(b), z{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int s = 0;
                for (int k = 0; k < n; ++k) s += x[i * n + k] * y[k * n + j];
                z[i * n + j] = s % q;
            }
        return encode(z);
    }
    long identity() const {
        Entries e{};
        for (int i = 0; i < n; ++i) e[i * n + i] = 1;
        return encode(e);
    }
    int det(long a) const {
        Entries m = decode(a);
        int d = 1;
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int r = c; r < n; ++r)
                if (m[r * n + c]) {
                    p = r;
                    break;
                }
            if (p < 0) return 0;
            if (p != c) {
                for (int k = 0; k < n; ++k) std::swap(m[p * n + k], m[c * n + k]);
                d = (q - d) % q;
            }
            d = d * m[c * n + c] % q;
            int iv = inv_mod(m[c * n + c]);
            for (int r = c + 1; r < n; ++r) {
                int f = m[r * n + c] * iv % q;
                for (int k = c; k < n; ++k) m[r * n + k] = ((m[r * n + k] - f * m[c * n + k]) % q + q) % q;
            }
        }
        return d;
    }
    long inverse(long a) const {
        Entries m = decode(a), r{};
        for (int i = 0; i < n; ++i) r[i * n + i] = 1;
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int k = c; k < n; ++k)
                if (m[k * n + c]) {
                    p = k;
                    break;
                }
            if (p < 0) throw std::invalid_argument("singular matrix");
            for (int k = 0; k < n; ++k) {
                std::swap(m[p * n + k], m[c * n + k]);
                std::swap(r[p * n + k], r[c * n + k]);
            }
            int iv = inv_mod(m[c * n + c]);
            for (int k = 0; k < n; ++k) {
                m[c * n + k] = m[c * n + k] * iv % q;
                r[c * n + k] = r[c * n + k] * iv % q;
            }
            for (int rr = 0; rr < n; ++rr) {
                if (rr == c || !m[rr * n + c]) continue;
                int f = m[rr * n + c];
                for (int k = 0; k < n; ++k) {
                    m[rr * n + k] = ((m[rr * n + k] - f * m[c * n + k]) % q + q) % q;
                    r[rr * n + k] = ((r[rr * n + k] - f * r[c * n + k]) % q + q) % q;
                }
            }
        }
        return encode(r);
    }
    /// Conjugation by the permutation matrix of p: entry (i, j) moves to (p[i], p[j]).
    long permute(long a, const std::vector<int>& p) const {
        Entries m = decode(a), r{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r[p[i] * n + p[j]] = m[i * n + j];
        return encode(r);
    }
    int inv_mod(int x) const {
        for (int y = 1; y < q; ++y)
            if (x * y % q == 1) return y;
        throw std::invalid_argument("not invertible mod q");
    }
};

inline bool is_prime(int q) {
    if (q < 2) return false;
    for (int d = 2; d * d <= q; ++d)
        if (q % d == 0) return false;
    return true;
}

inline long gl_order(int n, int q) {
    long o = 1, qn = 1;
    for (int i = 0; i < n; ++i) qn *= q;
    long qi = 1;
    for (int i = 0; i < n; ++i) {
        o *= qn - qi;
        qi *= q;
    }
    return o;
}

inline int block_of(const std::vector<int>& comp, int i) {
    int acc = 0;
    for (std::size_t b = 0; b < comp.size(); ++b) {
        acc += comp[b];
        if (i < acc) return static_cast<int>(b);
    }
    throw std::out_of_range("index outside composition");
}

/// True when μ is obtained by splitting the blocks of λ.
inline bool refines(const std::vector<int>& mu, const std::vector<int>& lambda) {
    std::size_t i = 0;
    for (int b : lambda) {
        int acc = 0;
        while (acc < b && i < mu.size()) acc += mu[i++];
        if (acc != b) return false;
    }
    return i == mu.size();
}

/**
 * Twisted space G·θ where G is the block-diagonal group GL_λ(F_q) and θ is
 * conjugation by a coordinate permutation. Elements x stand for x·θ;
 * G acts by x ↦ g x θ(g)^{-1}.
 */
class Space {
public:
    std::shared_ptr<const FieldMatrices> F;
    std::vector<int> lambda;
    std::vector<int> theta;
    std::vector<long> elements;
    std::vector<long> inverses;
    std::vector<long> theta_image;
    std::vector<int> class_of;  // per element index
    std::vector<std::vector<int>> classes;  // element indices; classes ordered by element order then smallest code
    std::unordered_map<long, int> index;

    int order() const { return static_cast<int>(elements.size()); }
    int nclasses() const { return static_cast<int>(classes.size()); }
    bool twisted() const {
        for (std::size_t i = 0; i < theta.size(); ++i)
            if (theta[i] != static_cast<int>(i)) return true;
        return false;
    }
    int idx(long code) const {
        auto it = index.find(code);
        return it == index.end() ? -1 : it->second;
    }
    long rep(int c) const { return elements[classes[c][0]]; }
    bool is_block_diagonal(long code) const {
        auto e = F->decode(code);
        for (int i = 0; i < F->n; ++i)
            for (int j = 0; j < F->n; ++j)
                if (e[i * F->n + j] && block_of(lambda, i) != block_of(lambda, j)) return false;
        return true;
    }
    /// Twisted conjugate g x θ(g)^{-1}.
    long act(int gi, long x) const { return F->mul(F->mul(elements[gi], x), theta_image_inv(gi)); }
    long theta_image_inv(int gi) const { return F->permute(inverses[gi], theta); }
    std::string key() const { return key_of(lambda, theta); }
    static std::string key_of(const std::vector<int>& l, const std::vector<int>& t) {
        std::string s = "l";
        for (int x : l) s += std::to_string(x) + ".";
        s += "t";
        for (int x : t) s += std::to_string(x) + ".";
        return s;
    }
};

using SpacePtr = std::shared_ptr<const Space>;

/** Invariant function on a space, one exact value per twisted class. */
struct ClassFunction {
    SpacePtr space;
    std::vector<Rational> values;

    Rational at_code(long code) const {
        int i = space->idx(code);
        if (i < 0) throw std::invalid_argument("element outside the space");
        return values[space->class_of[i]];
    }
    bool operator==(const ClassFunction& o) const { return space == o.space && values == o.values; }
    bool is_zero() const {
        for (const auto& v : values)
            if (v != 0) return false;
        return true;
    }
    ClassFunction operator-(const ClassFunction& o) const {
        ClassFunction r = *this;
        for (std::size_t i = 0; i < values.size(); ++i) r.values[i] -= o.values[i];
        return r;
    }
    ClassFunction operator+(const ClassFunction& o) const {
        ClassFunction r = *this;
        for (std::size_t i = 0; i < values.size(); ++i) r.values[i] += o.values[i];
        return r;
    }
    ClassFunction scaled(const Rational& c) const {
        ClassFunction r = *this;
        for (auto& v : r.values) v *= c;
        return r;
    }
};

/** Parabolic of a space: block upper (or lower) triangular for a refinement μ of λ. */
struct StandardParabolic {
    std::vector<int> mu;
    bool opposite = false;
};

/**
 * All spaces derived from one GL_n(F_q) with a fixed twist: the ambient space,
 * its Levi spaces, and cached unipotent radicals.
 */
class GroupFamily {
public:
    std::shared_ptr<const FieldMatrices> F;
    std::vector<int> theta;

    GroupFamily(int n, int q, std::vector<int> th = {}) : F(std::make_shared<FieldMatrices>(n, q)), theta(std::move(th)) {
        if (theta.empty()) {
            theta.resize(n);
            std::iota(theta.begin(), theta.end(), 0);
        }
    }

    /// Space for the block-diagonal group GL_λ; `preset_classes` skips the orbit computation.
    SpacePtr space(const std::vector<int>& lambda, const std::vector<long>* preset_elements = nullptr, const std::vector<int>* preset_class_of = nullptr) {
        auto key = Space::key_of(lambda, theta);
        auto it = spaces_.find(key);
        if (it != spaces_.end()) return it->second;
        auto S = std::make_shared<Space>();
        S->F = F;
        S->lambda = lambda;
        S->theta = theta;
        if (preset_elements)
            S->elements = *preset_elements;
        else
            S->elements = block_diagonal_group(lambda);
        for (int i = 0; i < S->order(); ++i) S->index[S->elements[i]] = i;
        for (long e : S->elements) {
            S->inverses.push_back(F->inverse(e));
            S->theta_image.push_back(F->permute(e, theta));
        }
        if (preset_class_of && preset_class_of->size() == S->elements.size())
            S->class_of = *preset_class_of;
        else
            compute_classes(*S);
        int nc = *std::max_element(S->class_of.begin(), S->class_of.end()) + 1;
        S->classes.assign(nc, {});
        for (int i = 0; i < S->order(); ++i) S->classes[S->class_of[i]].push_back(i);
        spaces_[key] = S;
        return S;
    }

    /// Unipotent radical of a parabolic inside the space for λ.
    const std::vector<long>& unipotent(const std::vector<int>& lambda, const StandardParabolic& P) {
        auto key = Space::key_of(lambda, P.mu) + (P.opposite ? "-" : "+");
        auto it = unip_.find(key);
        if (it != unip_.end()) return it->second;
        std::vector<long> U;
        for (long x : space(lambda)->elements)
            if (in_parabolic(x, P) && levi_part(x, P.mu) == F->identity()) U.push_back(x);
        return unip_[key] = U;
    }

    bool in_parabolic(long x, const StandardParabolic& P) const {
        auto e = F->decode(x);
        int n = F->n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!e[i * n + j]) continue;
                int bi = block_of(P.mu, i), bj = block_of(P.mu, j);
                if (P.opposite ? bi < bj : bi > bj) return false;
            }
        return true;
    }

    long levi_part(long x, const std::vector<int>& mu) const {
        auto e = F->decode(x);
        int n = F->n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (block_of(mu, i) != block_of(mu, j)) e[i * n + j] = 0;
        return F->encode(e);
    }

    std::vector<long> block_diagonal_group(const std::vector<int>& lambda) const {
        int n = F->n;
        // Enumerate block-diagonal matrices directly: only entries inside blocks vary.
        std::vector<int> free;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (block_of(lambda, i) == block_of(lambda, j)) free.push_back(i * n + j);
        std::vector<long> out;
        long combos = 1;
        for (std::size_t k = 0; k < free.size(); ++k) combos *= F->q;
        for (long c = 0; c < combos; ++c) {
            FieldMatrices::Entries e{};
            long t = c;
            for (int pos : free) {
                e[pos] = static_cast<int>(t % F->q);
                t /= F->q;
            }
            long code = F->encode(e);
            if (F->det(code)) out.push_back(code);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::map<std::string, SpacePtr> spaces_;
    std::map<std::string, std::vector<long>> unip_;

    int element_order(long x) const {
        long id = F->identity(), p = x;
        int k = 1;
        while (p != id) {
            p = F->mul(p, x);
            ++k;
        }
        return k;
    }

    void compute_classes(Space& S) const {
        int N = S.order();
        std::vector<int> raw(N, -1);
        std::vector<std::pair<std::pair<int, long>, int>> keys;  // ((order, min code), raw id)
        int nc = 0;
        for (int i = 0; i < N; ++i) {
            if (raw[i] >= 0) continue;
            long x = S.elements[i];
            long mn = x;
            for (int g = 0; g < N; ++g) {
                int j = S.idx(S.act(g, x));
                if (raw[j] < 0) {
                    raw[j] = nc;
                    mn = std::min(mn, S.elements[j]);
                }
            }
            raw[i] = nc;
            keys.push_back({{element_order(x), mn}, nc});
            ++nc;
        }
        std::sort(keys.begin(), keys.end());
        std::vector<int> rank(nc);
        for (int k = 0; k < nc; ++k) rank[keys[k].second] = k;
        S.class_of.resize(N);
        for (int i = 0; i < N; ++i) S.class_of[i] = rank[raw[i]];
    }
};

// ---------------------------------------------------------------------------
// Cache of conjugacy classes of GL_n(F_q), keyed by (n, q, format version).

inline constexpr int kCacheFormatVersion = 1;

inline std::filesystem::path default_cache_dir() {
    if (const char* e = std::getenv("LEVELZERO_CACHE_DIR")) return e;
    if (const char* h = std::getenv("HOME")) return std::filesystem::path(h) / ".cache" / "levelzero";
    return std::filesystem::temp_directory_path() / "levelzero-cache";
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, int n, int q) {
    return dir / ("gl_n" + std::to_string(n) + "_q" + std::to_string(q) + "_v" + std::to_string(kCacheFormatVersion) + ".json");
}

struct CachedClasses {
    std::vector<long> elements;
    std::vector<int> class_of;
};

/// Loads a cache entry; nullopt when missing or invalid.
inline std::optional<CachedClasses> load_cached_classes(const std::filesystem::path& file, int n, int q) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        auto j = nlohmann::json::parse(in);
        if (j.at("format_version").get<int>() != kCacheFormatVersion || j.at("n").get<int>() != n || j.at("q").get<int>() != q) return std::nullopt;
        CachedClasses c;
        c.elements = j.at("elements").get<std::vector<long>>();
        c.class_of = j.at("class_of").get<std::vector<int>>();
        if (static_cast<long>(c.elements.size()) != gl_order(n, q) || c.class_of.size() != c.elements.size()) return std::nullopt;
        if (!std::is_sorted(c.elements.begin(), c.elements.end())) return std::nullopt;
        int nc = j.at("classes").get<int>();
        for (int k : c.class_of)
            if (k < 0 || k >= nc) return std::nullopt;
        return c;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline void store_cached_classes(const std::filesystem::path& file, int n, int q, const Space& S) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    nlohmann::json j;
    j["format_version"] = kCacheFormatVersion;
    j["n"] = n;
    j["q"] = q;
    j["order"] = S.order();
    j["classes"] = S.nclasses();
    j["elements"] = S.elements;
    j["class_of"] = S.class_of;
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) return;
        out << j.dump();
    }
    std::filesystem::rename(tmp, file, ec);
}

/**
 * GL_n(F_q) with its conjugacy classes, as a family rooted at λ = (n).
 * Cache use is optional; a corrupt entry is rebuilt.
 */
inline std::shared_ptr<GroupFamily> build_gl(int n, int q, const std::optional<std::filesystem::path>& cache_dir = std::nullopt) {
    if (n < 1 || n > 3) throw std::invalid_argument("build_gl: n must be between 1 and 3");
    if (!is_prime(q)) throw std::invalid_argument("build_gl: q must be prime");
    if (gl_order(n, q) > 20000) throw std::invalid_argument("build_gl: |GL_n(F_q)| exceeds 20000");
    auto fam = std::make_shared<GroupFamily>(n, q);
    if (cache_dir) {
        auto file = cache_file(*cache_dir, n, q);
        if (auto c = load_cached_classes(file, n, q)) {
            fam->space({n}, &c->elements, &c->class_of);
            return fam;
        }
        store_cached_classes(file, n, q, *fam->space({n}));
    } else {
        fam->space({n});
    }
    return fam;
}

/// Torus (F_q^×)^n twisted by a coordinate permutation.
inline std::shared_ptr<GroupFamily> build_twisted_torus(int n, int q, const std::vector<int>& perm) {
    if (n < 1 || n > 4) throw std::invalid_argument("build_twisted_torus: n must be between 1 and 4");
    if (!is_prime(q)) throw std::invalid_argument("build_twisted_torus: q must be prime");
    std::vector<int> p = perm;
    if (p.empty()) {
        p.resize(n);
        std::iota(p.begin(), p.end(), 0);
    }
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(sorted.size()) != n || sorted[i] != i) throw std::invalid_argument("build_twisted_torus: not a permutation");
    auto fam = std::make_shared<GroupFamily>(n, q, p);
    fam->space(std::vector<int>(n, 1));
    return fam;
}

// ---------------------------------------------------------------------------
// Calculus.

inline ClassFunction zero_function(const SpacePtr& S) { return {S, std::vector<Rational>(S->nclasses(), Rational(0))}; }

inline ClassFunction constant_function(const SpacePtr& S, const Rational& c) { return {S, std::vector<Rational>(S->nclasses(), c)}; }

inline ClassFunction class_delta(const SpacePtr& S, int c) {
    auto f = zero_function(S);
    f.values.at(c) = 1;
    return f;
}

/// Builds a class function from element values; nullopt if not constant on twisted classes.
inline std::optional<ClassFunction> class_function_from_elements(const SpacePtr& S, const std::vector<Rational>& per_element) {
    if (static_cast<int>(per_element.size()) != S->order()) return std::nullopt;
    ClassFunction f = zero_function(S);
    for (int c = 0; c < S->nclasses(); ++c) {
        const auto& cl = S->classes[c];
        f.values[c] = per_element[cl[0]];
        for (int i : cl)
            if (per_element[i] != f.values[c]) return std::nullopt;
    }
    return f;
}

/// Parabolics available on a space: refinements of λ; a twisted space keeps only itself.
inline std::vector<std::vector<int>> standard_compositions(const Space& S) {
    if (S.twisted()) return {S.lambda};
    // Ordered refinements of each block, combined.
    std::vector<std::vector<std::vector<int>>> per_block;
    for (int b : S.lambda) {
        std::vector<std::vector<int>> comps;
        for (unsigned mask = 0; mask < (1u << (b - 1)); ++mask) {
            std::vector<int> c;
            int run = 1;
            for (int i = 0; i < b - 1; ++i) {
                if (mask & (1u << i)) {
                    c.push_back(run);
                    run = 1;
                } else {
                    ++run;
                }
            }
            c.push_back(run);
            comps.push_back(c);
        }
        std::sort(comps.begin(), comps.end());
        per_block.push_back(comps);
    }
    std::vector<std::vector<int>> acc{{}};
    for (const auto& opts : per_block) {
        std::vector<std::vector<int>> next;
        for (const auto& a : acc)
            for (const auto& o : opts) {
                auto c = a;
                c.insert(c.end(), o.begin(), o.end());
                next.push_back(c);
            }
        acc = next;
    }
    return acc;
}

/// One representative per conjugacy class of Levi spaces: per block, a partition in decreasing order.
inline std::vector<std::vector<int>> levi_representatives(const Space& S) {
    std::vector<std::vector<int>> out;
    for (const auto& c : standard_compositions(S)) {
        bool canonical = true;
        int start = 0;
        for (int b : S.lambda) {
            int acc = 0;
            int prev = 1 << 30;
            for (std::size_t i = start; i < c.size() && acc < b; ++i) {
                if (c[i] > prev) canonical = false;
                prev = c[i];
                acc += c[i];
                ++start;
            }
        }
        if (canonical) out.push_back(c);
    }
    return out;
}

/// res_M^G: average of f over m·U_P.
inline ClassFunction res_parabolic(GroupFamily& fam, const ClassFunction& f, const StandardParabolic& P) {
    const Space& G = *f.space;
    if (!refines(P.mu, G.lambda)) throw std::invalid_argument("res_parabolic: composition does not refine the space");
    if (G.twisted() && P.mu != G.lambda) throw std::invalid_argument("res_parabolic: parabolic is not θ-stable");
    auto M = fam.space(P.mu);
    const auto& U = fam.unipotent(G.lambda, P);
    ClassFunction r = zero_function(M);
    for (int c = 0; c < M->nclasses(); ++c) {
        long m = M->rep(c);
        Rational s = 0;
        for (long u : U) s += f.at_code(fam.F->mul(m, u));
        r.values[c] = s / static_cast<long>(U.size());
    }
    return r;
}

/// f[P]: element function on G supported on P, equal to f(m) on m·u.
inline std::vector<Rational> extend_by_zero(GroupFamily& fam, const ClassFunction& fM, const SpacePtr& G, const StandardParabolic& P) {
    std::vector<Rational> out(G->order(), Rational(0));
    for (int i = 0; i < G->order(); ++i) {
        long x = G->elements[i];
        if (fam.in_parabolic(x, P)) out[i] = fM.at_code(fam.levi_part(x, P.mu));
    }
    return out;
}

/// ind_M^G: |P|^{-1} Σ_x f[P](x^{-1} g θ(x)).
inline ClassFunction ind_parabolic(GroupFamily& fam, const ClassFunction& fM, const SpacePtr& G, const StandardParabolic& P) {
    if (fM.space->lambda != P.mu) throw std::invalid_argument("ind_parabolic: function does not live on the Levi of P");
    if (G->twisted() && P.mu != G->lambda) throw std::invalid_argument("ind_parabolic: parabolic is not θ-stable");
    const auto& U = fam.unipotent(G->lambda, P);
    long Porder = static_cast<long>(U.size()) * fM.space->order();
    ClassFunction r = zero_function(G);
    for (int c = 0; c < G->nclasses(); ++c) {
        long g = G->rep(c);
        Rational s = 0;
        for (int xi = 0; xi < G->order(); ++xi) {
            // x^{-1} g θ(x) is the action of x^{-1}.
            long y = fam.F->mul(fam.F->mul(G->inverses[xi], g), G->theta_image[xi]);
            if (fam.in_parabolic(y, P)) s += fM.at_code(fam.levi_part(y, P.mu));
        }
        r.values[c] = s / Porder;
    }
    return r;
}

inline bool is_cuspidal(GroupFamily& fam, const ClassFunction& f) {
    for (const auto& mu : standard_compositions(*f.space)) {
        if (mu == f.space->lambda) continue;
        if (!res_parabolic(fam, f, {mu, false}).is_zero()) return false;
    }
    return true;
}

/// Block-monomial for μ: each block row of g meets exactly one block column, of equal size.
/// Such g are exactly those normalizing the algebraic Levi M_μ (its F_q-points can be too small to tell, e.g. the torus over F_2).
inline bool normalizes_levi(const FieldMatrices& F, long g, const std::vector<int>& mu) {
    auto e = F.decode(g);
    int n = F.n, k = static_cast<int>(mu.size());
    std::vector<int> target(k, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!e[i * n + j]) continue;
            int bi = block_of(mu, i), bj = block_of(mu, j);
            if (target[bi] >= 0 && target[bi] != bj) return false;
            target[bi] = bj;
        }
    for (int b = 0; b < k; ++b)
        if (mu[b] != mu[target[b]]) return false;
    return true;
}

/// n^G(M) = |Norm_G(M^ν)| / |M|, counted over G.
inline long n_norm(GroupFamily& fam, const SpacePtr& G, const std::vector<int>& mu) {
    auto M = fam.space(mu);
    long count = 0;
    for (long g : G->elements) count += normalizes_levi(*fam.F, g, mu);
    return count / M->order();
}

/// Cuspidal projection through the Levi recursion of identity (1).
inline ClassFunction proj_cusp(GroupFamily& fam, const ClassFunction& f) {
    const SpacePtr& G = f.space;
    ClassFunction r = f;
    for (const auto& mu : levi_representatives(*G)) {
        if (mu == G->lambda) continue;
        auto h = proj_cusp(fam, res_parabolic(fam, f, {mu, false}));
        auto term = ind_parabolic(fam, h, G, {mu, false});
        r = r - term.scaled(Rational(1, n_norm(fam, G, mu)));
    }
    return r;
}

/// proj_{cusp, M}: restriction to M followed by cuspidal projection on M.
inline ClassFunction proj_cusp_levi(GroupFamily& fam, const ClassFunction& f, const std::vector<int>& mu) {
    if (mu == f.space->lambda) return proj_cusp(fam, f);
    return proj_cusp(fam, res_parabolic(fam, f, {mu, false}));
}

/// Right side of identity (1): Σ over Levi representatives of n^G(M)^{-1} ind(proj_{cusp,M} f).
inline ClassFunction identity1_rhs(GroupFamily& fam, const ClassFunction& f) {
    const SpacePtr& G = f.space;
    ClassFunction r = zero_function(G);
    for (const auto& mu : levi_representatives(*G)) {
        auto h = proj_cusp_levi(fam, f, mu);
        r = r + ind_parabolic(fam, h, G, {mu, false}).scaled(Rational(1, n_norm(fam, G, mu)));
    }
    return r;
}

/// Identity (2) for a standard Levi L: returns (res_L f, Σ over Levi representatives M of L of n^L(M)^{-1} ind_M^L proj_{cusp,M} f).
inline std::pair<ClassFunction, ClassFunction> identity2_sides(GroupFamily& fam, const ClassFunction& f, const std::vector<int>& lambdaL) {
    auto L = fam.space(lambdaL);
    ClassFunction lhs = lambdaL == f.space->lambda ? f : res_parabolic(fam, f, {lambdaL, false});
    ClassFunction rhs = zero_function(L);
    for (const auto& mu : levi_representatives(*L)) {
        auto h = proj_cusp_levi(fam, f, mu);
        rhs = rhs + ind_parabolic(fam, h, L, {mu, false}).scaled(Rational(1, n_norm(fam, L, mu)));
    }
    return {lhs, rhs};
}

/// Coefficient system z on standard compositions (constant on conjugacy classes of parabolics).
using ParabolicWeights = std::map<std::vector<int>, Rational>;

inline long factorial(int k) {
    long r = 1;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

/// Uniform weights z(P) = 1/|P(M)|.
inline ParabolicWeights uniform_weights(const Space& G) {
    ParabolicWeights z;
    for (const auto& mu : standard_compositions(G)) {
        long count = 1;
        // |P(M)| = product over λ-blocks of (number of μ-blocks inside)!
        int start = 0;
        for (int b : G.lambda) {
            int acc = 0, k = 0;
            while (acc < b) acc += mu[start + k++];
            start += k;
            count *= G.twisted() ? 1 : factorial(k);
        }
        z[mu] = Rational(1, count);
    }
    return z;
}

/// Checks condition (4): for each Levi, the weights of parabolics with that Levi sum to 1.
inline std::string check_weights(const Space& G, const ParabolicWeights& z) {
    auto comps = standard_compositions(G);
    for (const auto& mu : comps)
        if (!z.count(mu)) return "missing weight for a standard parabolic";
    // Parabolics with Levi M_μ: reorderings of the μ-blocks inside each λ-block; each is conjugate to the standard parabolic of the reordered composition.
    for (const auto& mu : comps) {
        if (G.twisted()) {
            if (z.at(mu) != 1) return "weights do not sum to 1";
            continue;
        }
        std::vector<std::vector<int>> segs;
        int start = 0;
        for (int b : G.lambda) {
            int acc = 0;
            std::vector<int> s;
            while (acc < b) {
                s.push_back(mu[start]);
                acc += mu[start++];
            }
            segs.push_back(s);
        }
        // Sum over all block permutations (as index permutations, so equal sizes count separately).
        Rational total = 0;
        std::function<void(std::size_t, std::vector<int>)> rec = [&](std::size_t b, std::vector<int> cur) {
            if (b == segs.size()) {
                total += z.at(cur);
                return;
            }
            std::vector<int> idx(segs[b].size());
            std::iota(idx.begin(), idx.end(), 0);
            do {
                auto c = cur;
                for (int i : idx) c.push_back(segs[b][i]);
                rec(b + 1, c);
            } while (std::next_permutation(idx.begin(), idx.end()));
        };
        rec(0, {});
        if (total != 1) return "weights do not sum to 1";
    }
    return "";
}

/// Right side of identity (5): Σ over all parabolic spaces P of z(P) (proj_{cusp,M_P} f)[P].
inline ClassFunction identity5_rhs(GroupFamily& fam, const ClassFunction& f, const ParabolicWeights& z) {
    const SpacePtr& G = f.space;
    auto err = check_weights(*G, z);
    if (!err.empty()) throw std::invalid_argument("invalid coefficient system: " + err);
    ClassFunction r = zero_function(G);
    for (const auto& mu : standard_compositions(*G)) {
        StandardParabolic P{mu, false};
        auto h = proj_cusp_levi(fam, f, mu);
        auto ext = extend_by_zero(fam, h, G, P);
        // Left coset representatives g of G/P: the conjugates g P θ(g)^{-1} are the parabolics of this class.
        std::vector<char> covered(G->order(), 0);
        std::vector<int> reps;
        const auto& U = fam.unipotent(G->lambda, P);
        auto M = fam.space(mu);
        for (int gi = 0; gi < G->order(); ++gi) {
            if (covered[gi]) continue;
            reps.push_back(gi);
            for (long m : M->elements)
                for (long u : U) covered[G->idx(fam.F->mul(G->elements[gi], fam.F->mul(m, u)))] = 1;
        }
        for (int c = 0; c < G->nclasses(); ++c) {
            long y = G->rep(c);
            Rational s = 0;
            for (int gi : reps) {
                long x = fam.F->mul(fam.F->mul(G->inverses[gi], y), G->theta_image[gi]);
                s += ext[G->idx(x)];
            }
            r.values[c] += z.at(mu) * s;
        }
    }
    return r;
}

struct DecompositionReport {
    bool identity1 = true;
    bool identity5 = true;
    std::map<std::vector<int>, bool> identity2;
    ClassFunction diff1, diff5;
    bool ok() const {
        for (const auto& [k, v] : identity2)
            if (!v) return false;
        return identity1 && identity5;
    }
};

/// Exact check of identities (1), (2) for every standard Levi, and (5) with weights z.
inline DecompositionReport verify_decomposition(GroupFamily& fam, const ClassFunction& f, const ParabolicWeights& z) {
    DecompositionReport rep;
    rep.diff1 = identity1_rhs(fam, f) - f;
    rep.identity1 = rep.diff1.is_zero();
    rep.diff5 = identity5_rhs(fam, f, z) - f;
    rep.identity5 = rep.diff5.is_zero();
    for (const auto& mu : standard_compositions(*f.space)) {
        auto [l, r] = identity2_sides(fam, f, mu);
        rep.identity2[mu] = l == r;
    }
    return rep;
}

/**
 * Reductive quotient of a facet of the Ã_{n-1} apartment as a composition of n.
 *
 * For a facet in the closure of the fundamental alcove, the blocks are the
 * cyclic gaps between the alcove vertices in its closure, read from the
 * first such vertex; otherwise the block sizes of Σ_F in decreasing order.
 */
inline std::vector<int> reductive_quotient_composition(const std::vector<int>& vertex_indices, int n) {
    std::vector<int> I = vertex_indices;
    std::sort(I.begin(), I.end());
    if (I.empty()) throw std::invalid_argument("reductive_quotient: no vertices");
    std::vector<int> out;
    for (std::size_t k = 0; k < I.size(); ++k) {
        int next = k + 1 < I.size() ? I[k + 1] : I[0] + n;
        out.push_back(next - I[k]);
    }
    return out;
}

/// Refinement of the quotient composition of F given by a facet F' whose closure contains F (vertex set of F' ⊇ that of F).
inline std::vector<int> quotient_levi_composition(const std::vector<int>& vertices_F, const std::vector<int>& vertices_Fp, int n) {
    std::vector<int> I = vertices_F, J = vertices_Fp;
    std::sort(I.begin(), I.end());
    std::sort(J.begin(), J.end());
    if (!std::includes(J.begin(), J.end(), I.begin(), I.end())) throw std::invalid_argument("quotient_levi_composition: facets are not nested");
    // Read J cyclically starting from the first vertex of I.
    std::vector<int> rot;
    for (int j : J) rot.push_back(j >= I[0] ? j : j + n);
    std::sort(rot.begin(), rot.end());
    std::vector<int> out;
    for (std::size_t k = 0; k < rot.size(); ++k) {
        int next = k + 1 < rot.size() ? rot[k + 1] : rot[0] + n;
        out.push_back(next - rot[k]);
    }
    return out;
}

}  // namespace levelzero
