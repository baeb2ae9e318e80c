#pragma once

#include "levelzero/linalg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace levelzero {

/**
 * Linear map of the apartment coordinates permuting the roots.
 *
 * `ambient` acts on the ambient realization, `y` on simple-root coordinates
 * (the value of each simple root), and `perm` records the induced root
 * permutation: w(roots[i]) = roots[perm[i]].
 */
struct WeylElement {
    Mat ambient;
    Mat y;
    std::vector<int> perm;
    std::string word;
};

/**
 * Reduced finite root system with an exact ambient realization.
 *
 * Positive roots occupy indices [0, npos), their negatives [npos, 2 npos)
 * in the same order. Points of the apartment are given by the values of
 * the simple roots, so each root acts through an integer form.
 */
struct RootSystem {
    std::string cartan_type;
    int rank = 0;
    int ambient_dim = 0;
    int npos = 0;
    std::vector<Vec> roots;
    std::vector<int> simple;
    std::vector<Vec> forms;
    std::vector<Vec> coroots;
    Mat metric;
    std::vector<int> component;
    int ncomponents = 0;
    std::map<std::string, int> form_index;

    int size() const { return static_cast<int>(roots.size()); }
    int neg(int i) const { return i < npos ? i + npos : i - npos; }
    bool is_positive(int i) const { return i < npos; }
    int positive_of(int i) const { return i < npos ? i : i - npos; }
    Rational eval(int i, const Vec& y) const { return dot(forms[i], y); }
    int index_of_form(const Vec& f) const {
        auto it = form_index.find(vec_key(f));
        return it == form_index.end() ? -1 : it->second;
    }
    int height(int i) const {
        long h = 0;
        for (const auto& c : forms[i]) h += c.get_num().get_si();
        return static_cast<int>(h);
    }
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

/** Root subset Σ^M together with the subspace 𝒜_M on which it vanishes. */
struct LeviSubset {
    std::vector<int> roots;
    std::vector<Vec> subspace_basis;

    bool operator==(const LeviSubset& o) const { return roots == o.roots; }
    bool operator<(const LeviSubset& o) const {
        if (roots.size() != o.roots.size()) return roots.size() < o.roots.size();
        return roots < o.roots;
    }
    bool contains_root(int r) const { return std::binary_search(roots.begin(), roots.end(), r); }
    bool contains(const LeviSubset& o) const {
        return std::includes(roots.begin(), roots.end(), o.roots.begin(), o.roots.end());
    }
};

/** Parabolic subset: Levi part plus Σ(U_P), with an interior point of its chamber. */
struct ParabolicSubset {
    LeviSubset levi;
    std::vector<int> positive_part;
    Vec interior;

    std::vector<int> roots() const {
        std::vector<int> r = levi.roots;
        r.insert(r.end(), positive_part.begin(), positive_part.end());
        std::sort(r.begin(), r.end());
        return r;
    }
    bool operator==(const ParabolicSubset& o) const { return roots() == o.roots(); }
    bool operator<(const ParabolicSubset& o) const { return roots() < o.roots(); }
    bool contains(const ParabolicSubset& o) const {
        auto a = roots(), b = o.roots();
        return std::includes(a.begin(), a.end(), b.begin(), b.end());
    }
};

namespace detail {

inline Vec ambient_vec(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

inline std::vector<Vec> type_a_roots(int n) {
    std::vector<Vec> r;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            Vec v = zero_vec(n + 1);
            v[i] = 1;
            v[j] = -1;
            r.push_back(v);
        }
    return r;
}

inline std::vector<Vec> irreducible_roots(const std::string& t, int& dim) {
    if (t == "A1") {
        dim = 2;
        return type_a_roots(1);
    }
    if (t == "A2") {
        dim = 3;
        return type_a_roots(2);
    }
    if (t == "A3") {
        dim = 4;
        return type_a_roots(3);
    }
    if (t == "B2" || t == "C2") {
        dim = 2;
        std::vector<Vec> r;
        for (long s : {1L, -1L}) {
            r.push_back(ambient_vec({s, 0}));
            r.push_back(ambient_vec({0, s}));
            r.push_back(ambient_vec({s, s}));
            r.push_back(ambient_vec({s, -s}));
        }
        return r;
    }
    if (t == "G2") {
        dim = 3;
        auto r = type_a_roots(2);
        for (int i = 0; i < 3; ++i)
            for (long s : {1L, -1L}) {
                Vec v = zero_vec(3);
                for (int j = 0; j < 3; ++j) v[j] = (j == i ? 2 * s : -s);
                r.push_back(v);
            }
        return r;
    }
    throw std::invalid_argument("unsupported Cartan type: " + t);
}

inline std::vector<std::string> split_product(const std::string& t) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : t) {
        if (c == 'x' || c == 'X' || c == '*') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace detail

/// Builds one of A1, A2, A3, B2 (= C2), G2 or an 'x'-separated product of rank at most 3.
inline RootSystemPtr build_root_system(const std::string& cartan_type) {
    auto rs = std::make_shared<RootSystem>();
    rs->cartan_type = cartan_type;
    std::vector<std::vector<Vec>> parts;
    std::vector<int> dims;
    for (const auto& p : detail::split_product(cartan_type)) {
        int d = 0;
        parts.push_back(detail::irreducible_roots(p, d));
        dims.push_back(d);
    }
    int total = std::accumulate(dims.begin(), dims.end(), 0);
    std::vector<Vec> all;
    int off = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        for (const auto& r : parts[k]) {
            Vec v = zero_vec(total);
            for (int j = 0; j < dims[k]; ++j) v[off + j] = r[j];
            all.push_back(v);
        }
        off += dims[k];
    }
    rs->ambient_dim = total;

    // Generic linear functional choosing the positive roots.
    Vec f(total);
    for (int i = 0; i < total; ++i) f[i] = Rational((total - i) * (total - i) * 10 + i);
    std::vector<Vec> pos;
    for (const auto& r : all) {
        Rational s = dot(f, r);
        if (s == 0) throw std::logic_error("positive system functional not generic");
        if (s > 0) pos.push_back(r);
    }
    auto key_of = [](const Vec& v) { return vec_key(v); };
    std::set<std::string> pos_keys;
    for (const auto& r : pos) pos_keys.insert(key_of(r));
    std::vector<Vec> simple;
    for (const auto& r : pos) {
        bool decomposable = false;
        for (const auto& b : pos)
            if (pos_keys.count(key_of(sub(r, b)))) decomposable = true;
        if (!decomposable) simple.push_back(r);
    }
    std::sort(simple.begin(), simple.end(), [](const Vec& a, const Vec& b) { return b < a; });
    int n = static_cast<int>(simple.size());
    rs->rank = n;
    if (n > 3) throw std::invalid_argument("rank above 3 unsupported: " + cartan_type);

    Mat gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gram(i, j) = dot(simple[i], simple[j]);
    auto ginv = inverse(gram);
    rs->metric = *ginv;

    auto coeffs = [&](const Vec& r) {
        Vec rhs(n);
        for (int i = 0; i < n; ++i) rhs[i] = dot(simple[i], r);
        Vec c = (*ginv) * rhs;
        for (const auto& x : c)
            if (!is_integer(x)) throw std::logic_error("non-integral root coefficients");
        return c;
    };
    std::vector<std::pair<Vec, Vec>> posc;
    for (const auto& r : pos) posc.push_back({coeffs(r), r});
    std::sort(posc.begin(), posc.end(), [](const auto& a, const auto& b) {
        Rational ha = 0, hb = 0;
        for (const auto& x : a.first) ha += x;
        for (const auto& x : b.first) hb += x;
        if (ha != hb) return ha < hb;
        return b.first < a.first;
    });
    rs->npos = static_cast<int>(posc.size());
    for (const auto& [c, r] : posc) {
        rs->roots.push_back(r);
        rs->forms.push_back(c);
    }
    for (const auto& [c, r] : posc) {
        rs->roots.push_back(scale(Rational(-1), r));
        rs->forms.push_back(scale(Rational(-1), c));
    }
    for (int i = 0; i < rs->size(); ++i) rs->form_index[vec_key(rs->forms[i])] = i;
    for (const auto& s : simple) rs->simple.push_back(rs->index_of_form(coeffs(s)));

    for (int i = 0; i < rs->size(); ++i) {
        const Vec& a = rs->roots[i];
        Rational aa = dot(a, a);
        Vec c(n);
        for (int j = 0; j < n; ++j) c[j] = 2 * dot(simple[j], a) / aa;
        rs->coroots.push_back(c);
    }

    // Irreducible components via the non-orthogonality graph on simple roots.
    rs->component.assign(n, -1);
    int comp = 0;
    for (int s = 0; s < n; ++s) {
        if (rs->component[s] >= 0) continue;
        std::deque<int> q{s};
        rs->component[s] = comp;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v = 0; v < n; ++v)
                if (rs->component[v] < 0 && gram(u, v) != 0) {
                    rs->component[v] = comp;
                    q.push_back(v);
                }
        }
        ++comp;
    }
    rs->ncomponents = comp;
    return rs;
}

/// Root index permutation induced by a point map L in simple-root coordinates, or empty if L does not permute the roots.
inline std::vector<int> root_permutation(const RootSystem& rs, const Mat& L) {
    auto inv = inverse(L);
    if (!inv) return {};
    std::vector<int> perm(rs.size());
    for (int i = 0; i < rs.size(); ++i) {
        int j = rs.index_of_form(row_times(rs.forms[i], *inv));
        if (j < 0) return {};
        perm[i] = j;
    }
    return perm;
}

/// Ambient matrix acting as L on the span of the roots and trivially on its orthogonal complement.
inline Mat ambient_from_y(const RootSystem& rs, const Mat& L) {
    int n = rs.rank, d = rs.ambient_dim;
    Mat R(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) R(i, j) = rs.roots[rs.simple[i]][j];
    Mat RRt = R * transpose(R);
    Mat Rplus = transpose(R) * *inverse(RRt);
    Mat proj = Rplus * R;
    return Rplus * L * R + (Mat::identity(d) - proj);
}

/// Reflection s_α as a map on simple-root coordinates.
inline Mat reflection_y(const RootSystem& rs, int root) {
    int n = rs.rank;
    Mat m = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) -= rs.coroots[root][i] * rs.forms[root][j];
    return m;
}

inline bool is_isometry(const RootSystem& rs, const Mat& L) { return transpose(L) * rs.metric * L == rs.metric; }

/// The Weyl group, generated by simple reflections and closed by breadth-first search.
inline std::vector<WeylElement> weyl_group(const RootSystem& rs) {
    int n = rs.rank;
    std::vector<WeylElement> out;
    std::map<std::string, int> seen;
    std::deque<int> q;
    WeylElement e;
    e.y = Mat::identity(n);
    e.word = "";
    out.push_back(e);
    seen[e.y.key()] = 0;
    q.push_back(0);
    std::vector<Mat> gens;
    for (int s : rs.simple) gens.push_back(reflection_y(rs, s));
    while (!q.empty()) {
        int cur = q.front();
        q.pop_front();
        for (int i = 0; i < n; ++i) {
            Mat m = out[cur].y * gens[i];
            auto k = m.key();
            if (seen.count(k)) continue;
            WeylElement w;
            w.y = m;
            w.word = out[cur].word + std::to_string(i + 1);
            seen[k] = static_cast<int>(out.size());
            out.push_back(w);
            q.push_back(static_cast<int>(out.size()) - 1);
        }
    }
    for (auto& w : out) {
        w.perm = root_permutation(rs, w.y);
        w.ambient = ambient_from_y(rs, w.y);
    }
    return out;
}

/// All isometries of the apartment coordinates permuting the roots (Weyl group extended by diagram symmetries).
inline std::vector<WeylElement> root_automorphisms(const RootSystem& rs) {
    int n = rs.rank, m = rs.size();
    std::vector<WeylElement> out;
    auto W = weyl_group(rs);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= m;
    for (long code = 0; code < total; ++code) {
        long c = code;
        Mat L(n, n);
        for (int i = 0; i < n; ++i) {
            int r = static_cast<int>(c % m);
            c /= m;
            for (int j = 0; j < n; ++j) L(i, j) = rs.forms[r][j];
        }
        if (det(L) == 0 || !is_isometry(rs, L)) continue;
        auto perm = root_permutation(rs, L);
        if (perm.empty()) continue;
        WeylElement w;
        w.y = L;
        w.perm = perm;
        w.ambient = ambient_from_y(rs, L);
        // Weyl elements keep their reflection word; others are named by the images of the simple roots.
        auto it = std::find_if(W.begin(), W.end(), [&](const WeylElement& x) { return x.y == L; });
        if (it != W.end()) {
            w.word = it->word;
        } else {
            w.word = "d";
            for (int sr : rs.simple) w.word += "." + std::to_string(perm[sr]);
        }
        out.push_back(w);
    }
    return out;
}

inline bool in_weyl_group(const std::vector<WeylElement>& W, const Mat& L) {
    for (const auto& w : W)
        if (w.y == L) return true;
    return false;
}

/// Levi subset of roots vanishing on a subspace, with 𝒜_M their common kernel.
inline LeviSubset levi_of_subspace(const RootSystem& rs, const std::vector<Vec>& basis) {
    LeviSubset L;
    for (int i = 0; i < rs.size(); ++i) {
        bool vanish = true;
        for (const auto& b : basis)
            if (rs.eval(i, b) != 0) {
                vanish = false;
                break;
            }
        if (vanish) L.roots.push_back(i);
    }
    std::vector<Vec> fs;
    for (int r : L.roots) fs.push_back(rs.forms[r]);
    L.subspace_basis = common_kernel(fs, rs.rank);
    return L;
}

/// Levi subset generated by a set of roots: all roots vanishing on their common kernel.
inline LeviSubset levi_of_roots(const RootSystem& rs, const std::vector<int>& roots) {
    std::vector<Vec> fs;
    for (int r : roots) fs.push_back(rs.forms[r]);
    return levi_of_subspace(rs, common_kernel(fs, rs.rank));
}

inline LeviSubset full_levi(const RootSystem& rs) {
    LeviSubset L;
    for (int i = 0; i < rs.size(); ++i) L.roots.push_back(i);
    return L;
}

inline LeviSubset minimal_levi(const RootSystem& rs) { return levi_of_subspace(rs, common_kernel({}, rs.rank)); }

/// All Levi subsets containing the minimal one, i.e. all flats of the linear root arrangement.
inline std::vector<LeviSubset> levi_lattice(const RootSystem& rs) {
    std::set<LeviSubset> found;
    for (unsigned mask = 0; mask < (1u << rs.npos); ++mask) {
        std::vector<int> sub;
        for (int i = 0; i < rs.npos; ++i)
            if (mask & (1u << i)) sub.push_back(i);
        found.insert(levi_of_roots(rs, sub));
    }
    return {found.begin(), found.end()};
}

/// Root permutation of the reflection in root r.
inline std::vector<int> reflection_perm(const RootSystem& rs, int r) {
    std::vector<int> perm(rs.size());
    for (int i = 0; i < rs.size(); ++i) {
        Rational c = dot(rs.forms[i], rs.coroots[r]);
        perm[i] = rs.index_of_form(sub(rs.forms[i], scale(c, rs.forms[r])));
    }
    return perm;
}

/// Positive roots of a subsystem with respect to a lexicographic pair of functionals.
inline std::vector<int> positive_system(const RootSystem& rs, const std::vector<int>& R, const Vec& v1, const Vec& v2) {
    std::vector<int> pos;
    for (int r : R) {
        Rational a = rs.eval(r, v1);
        if (a == 0) a = rs.eval(r, v2);
        if (a == 0) throw std::logic_error("tie-breaking functional not generic");
        if (a > 0) pos.push_back(r);
    }
    return pos;
}

/// Indecomposable elements of a positive system.
inline std::vector<int> simple_roots_of(const RootSystem& rs, const std::vector<int>& pos) {
    std::set<int> ps(pos.begin(), pos.end());
    std::vector<int> out;
    for (int r : pos) {
        bool dec = false;
        for (int b : pos) {
            int c = rs.index_of_form(sub(rs.forms[r], rs.forms[b]));
            if (c >= 0 && ps.count(c)) {
                dec = true;
                break;
            }
        }
        if (!dec) out.push_back(r);
    }
    return out;
}

/// A vector on which no root is zero (used to break ties).
inline Vec generic_vector(const RootSystem& rs) {
    for (long k = 2;; ++k) {
        Vec v(rs.rank);
        long p = 1;
        for (int i = 0; i < rs.rank; ++i) {
            v[i] = Rational(p);
            p *= k;
        }
        for (int i = 0; i < rs.rank; ++i) v[i] += Rational(1, 7 + i);
        bool ok = true;
        for (int r = 0; r < rs.size(); ++r)
            if (rs.eval(r, v) == 0) ok = false;
        if (ok) return v;
    }
}

/**
 * All parabolic subsets of a root subsystem R (closed under negation).
 *
 * Each is obtained from a positive system w(R^+) and a subset S of its
 * simple roots; duplicates are removed.
 */
inline std::vector<ParabolicSubset> parabolics_of(const RootSystem& rs, const std::vector<int>& R) {
    std::vector<int> Rs = R;
    std::sort(Rs.begin(), Rs.end());
    if (Rs.empty()) {
        ParabolicSubset P;
        P.levi = levi_of_roots(rs, {});
        P.interior = zero_vec(rs.rank);
        return {P};
    }
    std::vector<int> pos0;
    for (int r : Rs)
        if (rs.is_positive(r)) pos0.push_back(r);
    auto simple0 = simple_roots_of(rs, pos0);
    int k = static_cast<int>(simple0.size());
    // Coefficients of each root of R in the base simple0.
    Mat B(rs.rank, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < rs.rank; ++i) B(i, j) = rs.forms[simple0[j]][i];
    std::map<int, Vec> coeff;
    for (int r : Rs) coeff[r] = *solve(B, rs.forms[r]);

    // Weyl group of R as root permutations.
    std::vector<std::vector<int>> gens;
    for (int s : simple0) gens.push_back(reflection_perm(rs, s));
    std::vector<int> id(rs.size());
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<int>> seen{id};
    std::deque<std::vector<int>> q{id};
    while (!q.empty()) {
        auto w = q.front();
        q.pop_front();
        for (const auto& g : gens) {
            std::vector<int> c(rs.size());
            for (int i = 0; i < rs.size(); ++i) c[i] = w[g[i]];
            if (seen.insert(c).second) q.push_back(c);
        }
    }
    std::map<std::vector<int>, ParabolicSubset> found;
    for (const auto& w : seen) {
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            std::vector<int> levi, upos;
            for (int r : Rs) {
                bool in_span = true;
                for (int j = 0; j < k; ++j)
                    if (!(mask & (1u << j)) && coeff[r][j] != 0) in_span = false;
                if (in_span)
                    levi.push_back(w[r]);
                else if (rs.is_positive(r))
                    upos.push_back(w[r]);
            }
            std::sort(levi.begin(), levi.end());
            std::sort(upos.begin(), upos.end());
            std::vector<int> all = levi;
            all.insert(all.end(), upos.begin(), upos.end());
            std::sort(all.begin(), all.end());
            if (found.count(all)) continue;
            ParabolicSubset P;
            P.levi.roots = levi;
            std::vector<Vec> fs;
            for (int r : levi) fs.push_back(rs.forms[r]);
            P.levi.subspace_basis = common_kernel(fs, rs.rank);
            P.positive_part = upos;
            std::vector<Vec> rows;
            Vec rhs;
            for (int j = 0; j < k; ++j) {
                rows.push_back(rs.forms[w[simple0[j]]]);
                rhs.push_back(Rational((mask & (1u << j)) ? 0 : 1));
            }
            P.interior = *solve(Mat::from_rows(rows, rs.rank), rhs);
            found[all] = P;
        }
    }
    std::vector<ParabolicSubset> out;
    for (auto& [k2, P] : found) out.push_back(P);
    return out;
}

inline std::vector<int> all_roots(const RootSystem& rs) {
    std::vector<int> r(rs.size());
    std::iota(r.begin(), r.end(), 0);
    return r;
}

/// All parabolic subsets of Σ containing the minimal Levi.
inline std::vector<ParabolicSubset> all_parabolics(const RootSystem& rs) { return parabolics_of(rs, all_roots(rs)); }

/// Parabolic subsets with the given Levi: chambers of 𝒜_M cut by the roots outside Σ^M.
inline std::vector<ParabolicSubset> parabolics_with_levi(const RootSystem& rs, const LeviSubset& M) {
    std::vector<ParabolicSubset> out;
    for (auto& P : all_parabolics(rs))
        if (P.levi.roots == M.roots) out.push_back(P);
    return out;
}

/// Simple roots of the irreducible components of a root subsystem, grouped by component.
inline std::vector<std::vector<int>> components_of(const RootSystem& rs, const std::vector<int>& simple) {
    int k = static_cast<int>(simple.size());
    std::vector<int> comp(k, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < k; ++s) {
        if (comp[s] >= 0) continue;
        std::deque<int> q{s};
        comp[s] = static_cast<int>(out.size());
        out.push_back({});
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            out.back().push_back(simple[u]);
            for (int v = 0; v < k; ++v) {
                if (comp[v] >= 0) continue;
                if (dot(rs.roots[simple[u]], rs.roots[simple[v]]) != 0) {
                    comp[v] = comp[s];
                    q.push_back(v);
                }
            }
        }
    }
    return out;
}

}  // namespace levelzero
