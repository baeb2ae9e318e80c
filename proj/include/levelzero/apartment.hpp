#pragma once

#include "levelzero/linalg.hpp"
#include "levelzero/polytope.hpp"
#include "levelzero/rootsys.hpp"

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace levelzero {

/**
 * Facet of an affine root arrangement.
 *
 * One code per constraint root: 2c encodes α(x) = c, 2c+1 encodes
 * c < α(x) < c+1.
 */
struct Facet {
    std::vector<long> code;

    static bool is_eq(long k) { return (k & 1) == 0; }
    static long floor_part(long k) { return k >> 1; }
    static long eq_code(long c) { return 2 * c; }
    static long open_code(long c) { return 2 * c + 1; }

    bool operator==(const Facet& o) const { return code == o.code; }
    bool operator!=(const Facet& o) const { return code != o.code; }
    bool operator<(const Facet& o) const { return code < o.code; }
};

struct FacetHash {
    std::size_t operator()(const Facet& f) const {
        std::size_t h = 1469598103934665603ull;
        for (long k : f.code) h = (h ^ static_cast<std::size_t>(k + 0x9e3779b9)) * 1099511628211ull;
        return h;
    }
};

/** Affine map u -> L u + t on arrangement coordinates. */
struct AffineMap {
    Mat L;
    Vec t;

    Vec apply(const Vec& u) const { return add(L * u, t); }
    static AffineMap identity(int d) { return {Mat::identity(d), zero_vec(d)}; }
};

/**
 * Arrangement-preserving affine isometry of the apartment, in simple-root coordinates.
 * Models a twist; `g_compact` asserts the existence of a fixed point.
 */
struct ApartmentAutomorphism {
    Mat L;
    Vec t;
    bool g_compact = true;
    std::string label;

    Vec apply(const Vec& y) const { return add(L * y, t); }
    AffineMap as_map() const { return {L, t}; }
};

/// Checks the automorphism invariants; returns an empty string when valid.
inline std::string check_automorphism(const RootSystem& rs, const ApartmentAutomorphism& s) {
    if (s.L.rows != rs.rank || s.L.cols != rs.rank || static_cast<int>(s.t.size()) != rs.rank) return "shape mismatch";
    if (root_permutation(rs, s.L).empty()) return "linear part does not permute the roots";
    if (!is_isometry(rs, s.L)) return "linear part is not an isometry";
    for (int r = 0; r < rs.npos; ++r)
        if (!is_integer(rs.eval(r, s.t))) return "translation does not preserve the affine hyperplanes";
    Mat p = s.L;
    bool finite = false;
    for (int k = 1; k <= 24; ++k) {
        if (p == Mat::identity(rs.rank)) {
            finite = true;
            break;
        }
        p = p * s.L;
    }
    if (!finite) return "linear part of infinite order";
    if (s.g_compact && !solve(Mat::identity(rs.rank) - s.L, s.t)) return "no fixed point";
    return "";
}

struct FacetRecord {
    Facet facet;
    Vec barycenter;
    int dim = 0;
};

/** Polysimplex F^ν = F ∩ Fix(σ). */
struct FixedFacet {
    std::vector<Vec> affine_span_basis;
    Vec point;
    int dimension = 0;
    std::vector<std::vector<int>> vertex_orbits;
    std::vector<Vec> orbit_barycenters;
    bool is_point = false;
};

/**
 * Affine root arrangement on the apartment of a Levi subset.
 *
 * For the full system the coordinates are the simple-root values y. For a
 * Levi M the coordinates u parametrize the section spanned by the coroots
 * of a base of Σ^M, which identifies App^M with App / 𝒜_M.
 */
class Arrangement {
public:
    RootSystemPtr rs;
    LeviSubset levi;
    bool is_full = false;
    int dim = 0;
    std::vector<int> roots;
    std::vector<int> simple;
    std::vector<Vec> forms;
    std::vector<Vec> coroots;
    Mat section;
    Mat projection;
    Mat metric;

    static std::shared_ptr<const Arrangement> full(RootSystemPtr rs) {
        auto a = std::make_shared<Arrangement>();
        a->rs = rs;
        a->levi = full_levi(*rs);
        a->is_full = true;
        a->dim = rs->rank;
        for (int r = 0; r < rs->npos; ++r) {
            a->roots.push_back(r);
            a->forms.push_back(rs->forms[r]);
            a->coroots.push_back(rs->coroots[r]);
        }
        a->simple = rs->simple;
        a->section = Mat::identity(rs->rank);
        a->projection = Mat::identity(rs->rank);
        a->metric = rs->metric;
        a->init_bases();
        return a;
    }

    static std::shared_ptr<const Arrangement> of_levi(RootSystemPtr rs, const LeviSubset& M) {
        if (static_cast<int>(M.roots.size()) == rs->size()) return full(rs);
        auto a = std::make_shared<Arrangement>();
        a->rs = rs;
        a->levi = M;
        std::vector<int> pos;
        for (int r : M.roots)
            if (rs->is_positive(r)) pos.push_back(r);
        a->roots = pos;
        a->simple = simple_roots_of(*rs, pos);
        int m = static_cast<int>(a->simple.size());
        a->dim = m;
        a->section = Mat(rs->rank, m);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < rs->rank; ++i) a->section(i, j) = rs->coroots[a->simple[j]][i];
        Mat K(m, rs->rank);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < rs->rank; ++j) K(i, j) = rs->forms[a->simple[i]][j];
        if (m > 0) {
            Mat C = K * a->section;
            a->projection = *inverse(C) * K;
        } else {
            a->projection = Mat(0, rs->rank);
        }
        for (int r : pos) a->forms.push_back(row_times(rs->forms[r], a->section));
        a->metric = transpose(a->section) * rs->metric * a->section;
        for (std::size_t i = 0; i < pos.size(); ++i) a->coroots.push_back(a->coroot_of(a->forms[i]));
        a->init_bases();
        return a;
    }

    int nroots() const { return static_cast<int>(roots.size()); }

    Vec project(const Vec& y) const { return projection * y; }
    Vec lift(const Vec& u) const { return section * u; }

    /// Map induced on this arrangement by an automorphism of the full apartment preserving 𝒜_M.
    AffineMap induced(const ApartmentAutomorphism& s) const {
        if (is_full) return s.as_map();
        for (const auto& b : levi.subspace_basis) {
            Vec img = s.L * b;
            if (!in_span(levi.subspace_basis, img, rs->rank)) throw std::invalid_argument("automorphism does not preserve the Levi subspace");
        }
        return {projection * s.L * section, projection * s.t};
    }

    Facet facet_of_point(const Vec& u) const {
        Facet f;
        f.code.resize(forms.size());
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Rational v = dot(forms[i], u);
            long c = floor_of(v);
            f.code[i] = is_integer(v) ? Facet::eq_code(c) : Facet::open_code(c);
        }
        return f;
    }

    bool contains(const Facet& F, const Vec& u) const {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Rational v = dot(forms[i], u);
            long k = F.code[i];
            long c = Facet::floor_part(k);
            if (Facet::is_eq(k)) {
                if (v != c) return false;
            } else if (!(v > c && v < c + 1)) {
                return false;
            }
        }
        return true;
    }

    bool in_closure(const Facet& F, const Vec& u) const {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Rational v = dot(forms[i], u);
            long k = F.code[i];
            long c = Facet::floor_part(k);
            if (Facet::is_eq(k)) {
                if (v != c) return false;
            } else if (v < c || v > c + 1) {
                return false;
            }
        }
        return true;
    }

    /// True iff F1 lies in the closure of F.
    bool closure_contains(const Facet& F, const Facet& F1) const {
        for (std::size_t i = 0; i < F.code.size(); ++i) {
            long k = F.code[i], k1 = F1.code[i];
            if (Facet::is_eq(k)) {
                if (k1 != k) return false;
            } else {
                long c = Facet::floor_part(k);
                if (k1 != k && k1 != Facet::eq_code(c) && k1 != Facet::eq_code(c + 1)) return false;
            }
        }
        return true;
    }

    std::vector<Vec> eq_forms(const Facet& F) const {
        std::vector<Vec> fs;
        for (std::size_t i = 0; i < forms.size(); ++i)
            if (Facet::is_eq(F.code[i])) fs.push_back(forms[i]);
        return fs;
    }

    int facet_dim(const Facet& F) const { return dim - rank_of_rows(eq_forms(F), dim); }

    /// Basis of the direction space of F.
    std::vector<Vec> direction(const Facet& F) const { return common_kernel(eq_forms(F), dim); }

    /// Σ_F as global root indices, both signs.
    std::vector<int> sigma_F(const Facet& F) const {
        std::vector<int> out;
        for (std::size_t i = 0; i < forms.size(); ++i)
            if (Facet::is_eq(F.code[i])) {
                out.push_back(roots[i]);
                out.push_back(rs->neg(roots[i]));
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Vertices of the closure of F.
    std::vector<Vec> vertices(const Facet& F) const {
        std::vector<Vec> out;
        if (dim == 0) return {Vec{}};
        std::set<std::string> seen;
        for (const auto& B : bases_) {
            int d = dim;
            std::vector<std::vector<long>> choices(d);
            for (int r = 0; r < d; ++r) {
                long k = F.code[B.idx[r]];
                long c = Facet::floor_part(k);
                if (Facet::is_eq(k))
                    choices[r] = {c};
                else
                    choices[r] = {c, c + 1};
            }
            std::vector<int> pick(d, 0);
            while (true) {
                Vec vals(d);
                for (int r = 0; r < d; ++r) vals[r] = Rational(choices[r][pick[r]]);
                Vec u = B.inv * vals;
                if (in_closure(F, u) && seen.insert(vec_key(u)).second) out.push_back(u);
                int r = 0;
                while (r < d && ++pick[r] == static_cast<int>(choices[r].size())) pick[r++] = 0;
                if (r == d) break;
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Vec barycenter(const Facet& F) const {
        auto v = vertices(F);
        if (v.empty()) throw std::invalid_argument("facet is not realizable");
        if (dim == 0) return Vec{};
        return centroid(v);
    }

    /// Facets in the closure of F (F included), with their barycenters.
    std::vector<FacetRecord> closure_facets(const Facet& F) const { return closure_facets_from(vertices(F)); }

    std::vector<FacetRecord> closure_facets_from(const std::vector<Vec>& verts) const {
        std::vector<FacetRecord> out;
        int k = static_cast<int>(verts.size());
        if (dim == 0) {
            out.push_back({facet_of_point(Vec{}), Vec{}, 0});
            return out;
        }
        std::set<Facet> seen;
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            std::vector<Vec> sub;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) sub.push_back(verts[i]);
            Vec b = centroid(sub);
            Facet f = facet_of_point(b);
            if (seen.count(f)) continue;
            int inside = 0;
            for (const auto& v : verts)
                if (in_closure(f, v)) ++inside;
            if (inside != static_cast<int>(sub.size())) continue;
            seen.insert(f);
            out.push_back({f, b, facet_dim(f)});
        }
        std::sort(out.begin(), out.end(), [](const FacetRecord& a, const FacetRecord& b) { return a.facet < b.facet; });
        return out;
    }

    Facet image(const AffineMap& s, const Facet& F) const { return facet_of_point(s.apply(barycenter(F))); }

    bool stabilizes(const AffineMap& s, const Facet& F) const {
        Vec b = barycenter(F);
        return facet_of_point(s.apply(b)) == F;
    }

    /// Closure of F as a polytope in its affine span.
    Polytope closure_polytope(const Facet& F) const {
        Polytope P;
        auto eqs = eq_rows(F);
        P.space = affine_solutions(eqs.first, eqs.second);
        add_interval_halfspaces(F, P);
        return P;
    }

    /// Closure of F intersected with the fixed set of s.
    Polytope fixed_closure_polytope(const Facet& F, const AffineMap& s) const {
        Polytope P;
        auto eqs = eq_rows(F);
        std::vector<Vec> rows;
        Vec rhs;
        for (int i = 0; i < eqs.first.rows; ++i) {
            rows.push_back(eqs.first.row(i));
            rhs.push_back(eqs.second[i]);
        }
        Mat IL = Mat::identity(dim) - s.L;
        for (int i = 0; i < dim; ++i) {
            rows.push_back(IL.row(i));
            rhs.push_back(s.t[i]);
        }
        P.space = affine_solutions(Mat::from_rows(rows, dim), rhs);
        add_interval_halfspaces(F, P);
        return P;
    }

    /// F^ν for an automorphism s stabilizing F.
    FixedFacet fixed_facet(const Facet& F, const AffineMap& s) const {
        if (!stabilizes(s, F)) throw std::invalid_argument("fixed_facet: automorphism does not stabilize the facet");
        FixedFacet X;
        auto verts = vertices(F);
        X.point = centroid(verts);
        auto dir = direction(F);
        std::vector<Vec> fixed = common_kernel(rows_of(Mat::identity(dim) - s.L), dim);
        X.affine_span_basis = intersect_spans(dir, fixed, dim);
        X.dimension = static_cast<int>(X.affine_span_basis.size());
        X.is_point = X.dimension == 0;
        std::vector<int> seen(verts.size(), -1);
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (seen[i] >= 0) continue;
            std::vector<int> orbit;
            std::size_t cur = i;
            while (seen[cur] < 0) {
                seen[cur] = static_cast<int>(X.vertex_orbits.size());
                orbit.push_back(static_cast<int>(cur));
                Vec img = s.apply(verts[cur]);
                auto it = std::find(verts.begin(), verts.end(), img);
                if (it == verts.end()) throw std::logic_error("automorphism does not permute closure vertices");
                cur = static_cast<std::size_t>(it - verts.begin());
            }
            std::vector<Vec> pts;
            for (int o : orbit) pts.push_back(verts[o]);
            X.vertex_orbits.push_back(orbit);
            X.orbit_barycenters.push_back(centroid(pts));
        }
        return X;
    }

    /// Constraints of closure(F), pulled back along y ↦ pull·y, appended to an equation system and a half-space list.
    void pullback_closure(const Facet& F, const Mat& pull, std::vector<Vec>& eqs, Vec& rhs, std::vector<HalfSpace>& hs) const {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            Vec f = row_times(forms[i], pull);
            long k = F.code[i];
            long c = Facet::floor_part(k);
            if (Facet::is_eq(k)) {
                eqs.push_back(f);
                rhs.push_back(Rational(c));
            } else {
                hs.push_back({f, Rational(c)});
                hs.push_back({scale(Rational(-1), f), Rational(-(c + 1))});
            }
        }
    }

    std::vector<Vec> fixed_directions(const Facet& F, const AffineMap& s) const {
        return intersect_spans(direction(F), common_kernel(rows_of(Mat::identity(dim) - s.L), dim), dim);
    }

    Vec coroot_of(const Vec& form) const {
        if (dim == 0) return {};
        Mat Hinv = *inverse(metric);
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = dot(Hinv.row(i), form);
        Rational n = dot(form, v);
        return scale(Rational(2) / n, v);
    }

private:
    struct VertexBasis {
        std::vector<int> idx;
        Mat inv;
    };
    std::vector<VertexBasis> bases_;

    static std::vector<Vec> rows_of(const Mat& m) {
        std::vector<Vec> out;
        for (int i = 0; i < m.rows; ++i) out.push_back(m.row(i));
        return out;
    }

    std::pair<Mat, Vec> eq_rows(const Facet& F) const {
        std::vector<Vec> rows;
        Vec rhs;
        for (std::size_t i = 0; i < forms.size(); ++i)
            if (Facet::is_eq(F.code[i])) {
                rows.push_back(forms[i]);
                rhs.push_back(Rational(Facet::floor_part(F.code[i])));
            }
        return {Mat::from_rows(rows, dim), rhs};
    }

    void add_interval_halfspaces(const Facet& F, Polytope& P) const {
        for (std::size_t i = 0; i < forms.size(); ++i) {
            long k = F.code[i];
            if (Facet::is_eq(k)) continue;
            long c = Facet::floor_part(k);
            P.halfspaces.push_back({forms[i], Rational(c)});
            P.halfspaces.push_back({scale(Rational(-1), forms[i]), Rational(-(c + 1))});
        }
    }

    void init_bases() {
        int m = nroots(), d = dim;
        if (d == 0) return;
        std::vector<int> idx(d);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == d) {
                Mat A(d, d);
                for (int r = 0; r < d; ++r)
                    for (int j = 0; j < d; ++j) A(r, j) = forms[idx[r]][j];
                auto inv = inverse(A);
                if (inv) bases_.push_back({idx, *inv});
                return;
            }
            for (int i = start; i < m; ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
    }
};

using ArrangementPtr = std::shared_ptr<const Arrangement>;

// ---------------------------------------------------------------------------
// Full-apartment operations.

/// M_F: roots constant on F.
inline LeviSubset levi_of_facet(const Arrangement& A, const Facet& F) {
    std::vector<Vec> dir;
    for (const auto& d : A.direction(F)) dir.push_back(A.lift(d));
    if (!A.is_full) {
        for (const auto& b : A.levi.subspace_basis) dir.push_back(b);
    }
    return levi_of_subspace(*A.rs, dir);
}

/// M_{F,ν}: roots vanishing on the σ-fixed part of the direction space of F.
inline LeviSubset levi_of_twisted_facet(const Arrangement& A, const Facet& F, const AffineMap& s) {
    if (!A.stabilizes(s, F)) throw std::invalid_argument("levi_of_twisted_facet: automorphism does not stabilize the facet");
    std::vector<Vec> dir;
    for (const auto& d : A.fixed_directions(F, s)) dir.push_back(A.lift(d));
    if (!A.is_full) {
        for (const auto& b : A.levi.subspace_basis) dir.push_back(b);
    }
    return levi_of_subspace(*A.rs, dir);
}

/**
 * Parabolic subset of Σ_F attached to a facet F1 whose closure contains F:
 * roots of Σ_F that increase from F into F1.
 */
inline ParabolicSubset parabolic_of_pair(const Arrangement& A, const Facet& F, const Facet& F1) {
    if (!A.closure_contains(F1, F)) throw std::invalid_argument("parabolic_of_pair: F is not in the closure of F1");
    const RootSystem& rs = *A.rs;
    ParabolicSubset P;
    std::vector<int> levi;
    for (int i = 0; i < A.nroots(); ++i) {
        if (!Facet::is_eq(F.code[i])) continue;
        int r = A.roots[i];
        long k1 = F1.code[i];
        long c = Facet::floor_part(F.code[i]);
        if (Facet::is_eq(k1)) {
            levi.push_back(r);
            levi.push_back(rs.neg(r));
        } else if (Facet::floor_part(k1) == c) {
            P.positive_part.push_back(r);
        } else {
            P.positive_part.push_back(rs.neg(r));
        }
    }
    std::sort(levi.begin(), levi.end());
    std::sort(P.positive_part.begin(), P.positive_part.end());
    P.levi.roots = levi;
    std::vector<Vec> fs;
    for (int r : levi) fs.push_back(rs.forms[r]);
    P.levi.subspace_basis = common_kernel(fs, rs.rank);
    P.interior = sub(A.lift(A.barycenter(F1)), A.lift(A.barycenter(F)));
    return P;
}

/// F^M: restriction of the facet data of a full-apartment facet to Σ^M.
inline Facet project_facet(const Arrangement& full, const Facet& F, const Arrangement& AM) {
    Facet out;
    for (int r : AM.roots) {
        auto it = std::find(full.roots.begin(), full.roots.end(), r);
        out.code.push_back(F.code[static_cast<std::size_t>(it - full.roots.begin())]);
    }
    return out;
}

/// Facets whose closure contains F, one per parabolic subset of Σ_F.
inline std::vector<FacetRecord> star(const Arrangement& A, const Facet& F) {
    if (!A.is_full) throw std::invalid_argument("star: full apartment only");
    const RootSystem& rs = *A.rs;
    Vec b = A.barycenter(F);
    std::vector<FacetRecord> out;
    std::set<Facet> seen;
    for (const auto& P : parabolics_of(rs, A.sigma_F(F))) {
        const Vec& v = P.interior;
        Rational eps = 1;
        for (int i = 0; i < A.nroots(); ++i) {
            Rational av = dot(A.forms[i], v);
            if (av == 0) continue;
            if (av < 0) av = -av;
            Rational x = dot(A.forms[i], b);
            Rational gap = 1;
            if (!is_integer(x)) {
                Rational fr = x - Rational(floor_of(x));
                gap = fr < 1 - fr ? fr : 1 - fr;
            }
            Rational e = gap / (2 * av);
            if (e < eps) eps = e;
        }
        Vec p = add(b, scale(eps, v));
        Facet f = A.facet_of_point(p);
        if (seen.insert(f).second) out.push_back({f, A.barycenter(f), A.facet_dim(f)});
    }
    std::sort(out.begin(), out.end(), [](const FacetRecord& x, const FacetRecord& y) { return x.facet < y.facet; });
    return out;
}

// ---------------------------------------------------------------------------
// Regions.

/** Region of the full apartment: conjunction of root inequalities. */
struct Region {
    enum class Op { LE, GE, GT };
    struct Constraint {
        int root;
        Op op;
        Rational c;
    };
    std::vector<Constraint> constraints;

    bool contains(const RootSystem& rs, const Vec& y) const {
        for (const auto& k : constraints) {
            Rational v = rs.eval(k.root, y);
            switch (k.op) {
                case Op::LE:
                    if (v > k.c) return false;
                    break;
                case Op::GE:
                    if (v < k.c) return false;
                    break;
                case Op::GT:
                    if (v <= k.c) return false;
                    break;
            }
        }
        return true;
    }

    /// Bounded iff the bounding forms span and admit no common recession ray.
    bool bounded(const RootSystem& rs) const {
        int n = rs.rank;
        std::vector<Vec> V;
        for (const auto& k : constraints) V.push_back(k.op == Op::LE ? rs.forms[k.root] : scale(Rational(-1), rs.forms[k.root]));
        if (n == 0) return true;
        if (rank_of_rows(V, n) < n) return false;
        int m = static_cast<int>(V.size());
        std::vector<int> idx(n - 1);
        bool ray_found = false;
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (ray_found) return;
            if (depth == n - 1) {
                std::vector<Vec> rows;
                for (int i : idx) rows.push_back(V[i]);
                auto ker = common_kernel(rows, n);
                if (ker.size() != 1) return;
                for (Rational sgn : {Rational(1), Rational(-1)}) {
                    Vec d = scale(sgn, ker[0]);
                    bool ok = true;
                    for (const auto& v : V)
                        if (dot(v, d) > 0) ok = false;
                    if (ok) ray_found = true;
                }
                return;
            }
            for (int i = start; i < m; ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        return !ray_found;
    }

    /// Closure of the region as a polytope in simple-root coordinates.
    Polytope closure_polytope(const RootSystem& rs) const {
        Polytope P;
        P.space = affine_solutions(Mat(0, rs.rank), {});
        for (const auto& k : constraints) {
            if (k.op == Op::LE)
                P.halfspaces.push_back({scale(Rational(-1), rs.forms[k.root]), -k.c});
            else
                P.halfspaces.push_back({rs.forms[k.root], k.c});
        }
        return P;
    }
};

/// The §13 box B_R around a base facet.
inline Region build_BR(const Arrangement& A, const Facet& F_star, long R) {
    if (!A.is_full) throw std::invalid_argument("build_BR: full apartment only");
    if (R <= 0) throw std::invalid_argument("build_BR: R must be positive");
    Region reg;
    for (int i = 0; i < A.nroots(); ++i) {
        long k = F_star.code[i];
        long c = Facet::floor_part(k);
        long hi = Facet::is_eq(k) ? c + R : c + 1 + R;
        reg.constraints.push_back({A.roots[i], Region::Op::GE, Rational(c - R)});
        reg.constraints.push_back({A.roots[i], Region::Op::LE, Rational(hi)});
    }
    return reg;
}

/**
 * All facets contained in a bounded full-dimensional region, sorted by code.
 *
 * Alcoves are reached by breadth-first reflection of barycenters across
 * root hyperplanes; facets are the closure faces of those alcoves.
 */
inline std::vector<FacetRecord> enumerate_facets(const Arrangement& A, const Region& region) {
    if (!A.is_full) throw std::invalid_argument("enumerate_facets: full apartment only");
    const RootSystem& rs = *A.rs;
    if (!region.bounded(rs)) throw std::invalid_argument("enumerate_facets: unbounded region");
    auto poly = region.closure_polytope(rs);
    auto pverts = poly.vertices();
    if (pverts.empty()) return {};
    Vec p = centroid(pverts);
    Facet f0 = A.facet_of_point(p);
    Vec start;
    bool found = false;
    for (const auto& rec : star(A, f0)) {
        if (rec.dim == A.dim && region.contains(rs, rec.barycenter)) {
            start = rec.barycenter;
            found = true;
            break;
        }
    }
    if (!found) throw std::invalid_argument("enumerate_facets: region has empty interior");

    std::unordered_set<Facet, FacetHash> seen_alcoves;
    std::deque<Vec> queue{start};
    seen_alcoves.insert(A.facet_of_point(start));
    std::unordered_map<Facet, FacetRecord, FacetHash> facets;
    while (!queue.empty()) {
        Vec b = queue.front();
        queue.pop_front();
        for (const auto& rec : A.closure_facets(A.facet_of_point(b)))
            if (!facets.count(rec.facet) && region.contains(rs, rec.barycenter)) facets.emplace(rec.facet, rec);
        for (int i = 0; i < A.nroots(); ++i) {
            Rational v = dot(A.forms[i], b);
            long c = floor_of(v);
            for (long h : {c, c + 1}) {
                Vec nb = sub(b, scale(v - h, A.coroots[i]));
                Facet nf = A.facet_of_point(nb);
                if (seen_alcoves.count(nf)) continue;
                if (!region.contains(rs, nb)) continue;
                seen_alcoves.insert(nf);
                queue.push_back(nb);
            }
        }
    }
    std::vector<FacetRecord> out;
    out.reserve(facets.size());
    for (auto& [f, rec] : facets) out.push_back(rec);
    std::sort(out.begin(), out.end(), [](const FacetRecord& x, const FacetRecord& y) { return x.facet < y.facet; });
    return out;
}

// ---------------------------------------------------------------------------
// X_N(P) strata.

inline bool in_XN_prime(const RootSystem& rs, const ParabolicSubset& P, const Vec& y, long N) {
    for (int r : P.positive_part)
        if (rs.eval(r, y) <= N) return false;
    return true;
}

/**
 * The unique parabolic P of a root subsystem R with y ∈ X_N(P).
 *
 * Picks a base Δ whose chamber closure contains y and keeps in the Levi the
 * simple roots with value at most N.
 */
inline ParabolicSubset classify_XN_in(const RootSystem& rs, const std::vector<int>& R, const Vec& y, long N) {
    Vec g = generic_vector(rs);
    auto pos = positive_system(rs, R, y, g);
    auto base = simple_roots_of(rs, pos);
    std::vector<int> keep;
    for (int a : base)
        if (rs.eval(a, y) <= N) keep.push_back(a);
    // Coefficients of roots in the base.
    int k = static_cast<int>(base.size());
    Mat B(rs.rank, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < rs.rank; ++i) B(i, j) = rs.forms[base[j]][i];
    ParabolicSubset P;
    std::set<int> keepset(keep.begin(), keep.end());
    for (int r : R) {
        Vec c = *solve(B, rs.forms[r]);
        bool in_levi = true;
        for (int j = 0; j < k; ++j)
            if (c[j] != 0 && !keepset.count(base[j])) in_levi = false;
        if (in_levi)
            P.levi.roots.push_back(r);
        else if (std::find(pos.begin(), pos.end(), r) != pos.end())
            P.positive_part.push_back(r);
    }
    std::sort(P.levi.roots.begin(), P.levi.roots.end());
    std::sort(P.positive_part.begin(), P.positive_part.end());
    std::vector<Vec> fs;
    for (int r : P.levi.roots) fs.push_back(rs.forms[r]);
    P.levi.subspace_basis = common_kernel(fs, rs.rank);
    return P;
}

inline ParabolicSubset classify_XN(const RootSystem& rs, const Vec& y, long N) { return classify_XN_in(rs, all_roots(rs), y, N); }

/// Height of the highest root: X_N(G) lies in |β(y)| ≤ N·h for every root β.
inline long XN_box_bound(const RootSystem& rs, long N) {
    long h = 0;
    for (int r = 0; r < rs.npos; ++r) h = std::max<long>(h, rs.height(r));
    return N * h;
}

// ---------------------------------------------------------------------------
// Sign identity.

/// Determinant of the linear part of s restricted to the direction space of F.
inline Rational direction_determinant(const Arrangement& A, const Facet& F, const AffineMap& s) {
    auto dir = A.direction(F);
    int k = static_cast<int>(dir.size());
    if (k == 0) return 1;
    Mat B = Mat::from_cols(dir, A.dim);
    Mat C(k, k);
    for (int j = 0; j < k; ++j) {
        auto c = solve(B, s.L * dir[j]);
        if (!c) throw std::logic_error("direction space not preserved");
        for (int i = 0; i < k; ++i) C(i, j) = (*c)[i];
    }
    return det(C);
}

/// sign det(σ on the direction space of F) · (−1)^{dim F} = (−1)^{dim F^ν}.
inline bool sign_identity_check(const Arrangement& A, const Facet& F, const AffineMap& s) {
    if (!A.stabilizes(s, F)) throw std::invalid_argument("sign_identity_check: automorphism does not stabilize the facet");
    Rational d = direction_determinant(A, F, s);
    int eps = d > 0 ? 1 : -1;
    int dimF = A.facet_dim(F);
    int dimFix = A.fixed_facet(F, s).dimension;
    int lhs = eps * ((dimF % 2) ? -1 : 1);
    int rhs = (dimFix % 2) ? -1 : 1;
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Lemma 7 condition (c).

/**
 * Condition (c): σ stabilizes F, M ⊇ M_{F,ν}, and F^M = F_M.
 * `AM` is the M-arrangement in which F_M lives.
 */
inline bool lemma7_class(const Arrangement& full, const Facet& F, const Arrangement& AM, const Facet& F_M, const ApartmentAutomorphism& s) {
    auto sM = AM.induced(s);
    if (!AM.stabilizes(sM, F_M)) throw std::invalid_argument("lemma7_class: σ does not stabilize F_M");
    if (!s.g_compact) throw std::invalid_argument("lemma7_class: σ must be G-compact");
    auto m = s.as_map();
    if (!full.stabilizes(m, F)) return false;
    if (!AM.levi.contains(levi_of_twisted_facet(full, F, m))) return false;
    return project_facet(full, F, AM) == F_M;
}

/// cl(F) ∩ p_M^{-1}(cl(F_M) ∩ Fix(s_M)), in full coordinates.
inline Polytope preimage_closure(const Arrangement& full, const Facet& F, const Arrangement& AM, const Facet& F_M, const AffineMap& sM) {
    int d = full.dim;
    std::vector<Vec> eqs;
    Vec rhs;
    Polytope Q;
    full.pullback_closure(F, Mat::identity(d), eqs, rhs, Q.halfspaces);
    AM.pullback_closure(F_M, AM.projection, eqs, rhs, Q.halfspaces);
    // s_M(P y) = P y.
    Mat fix = (Mat::identity(AM.dim) - sM.L) * AM.projection;
    for (int i = 0; i < fix.rows; ++i) {
        eqs.push_back(fix.row(i));
        rhs.push_back(sM.t[i]);
    }
    Q.space = affine_solutions(Mat::from_rows(eqs, d), rhs);
    return Q;
}

/// Dimension of the affine hull of a nonempty point set.
inline int affine_dimension(const std::vector<Vec>& pts) {
    if (pts.empty()) return -1;
    std::vector<Vec> diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
    return diffs.empty() ? 0 : rank_of_rows(diffs, static_cast<int>(pts[0].size()));
}

/// Direction space of p_M^{-1}(F_M^ν): lifted fixed directions of F_M plus 𝒜_M.
inline std::vector<Vec> preimage_directions(const Arrangement& AM, const Facet& F_M, const AffineMap& sM) {
    std::vector<Vec> dir = AM.levi.subspace_basis;
    for (const auto& v : AM.fixed_directions(F_M, sM)) dir.push_back(AM.lift(v));
    return dir;
}

/**
 * Condition (a): F ∩ p_M^{-1}(F_M^ν) is a nonempty open subset of
 * p_M^{-1}(F_M^ν). Both sets are relatively open and convex, so this holds
 * iff the preimage's directions lie in those of F and the centroid of the
 * closed intersection lies in both.
 */
inline bool lemma7_open_condition(const Arrangement& full, const Facet& F, const Arrangement& AM, const Facet& F_M, const ApartmentAutomorphism& s) {
    auto sM = AM.induced(s);
    auto dirF = full.direction(F);
    for (const auto& v : preimage_directions(AM, F_M, sM))
        if (!in_span(dirF, v, full.dim)) return false;
    auto verts = preimage_closure(full, F, AM, F_M, sM).vertices();
    if (verts.empty()) return false;
    Vec c = centroid(verts);
    Vec u = AM.project(c);
    return full.contains(F, c) && AM.contains(F_M, u) && sM.apply(u) == u;
}

/**
 * F^ν = F ∩ p_M^{-1}(F^{M,ν}) for M ⊇ M_{F,ν}, open in the preimage: the
 * closures agree and F^ν has the preimage's full dimension.
 */
inline bool fixed_preimage_check(const Arrangement& full, const Facet& F, const Arrangement& AM, const AffineMap& s) {
    auto FM = project_facet(full, F, AM);
    auto sM = AM.induced(ApartmentAutomorphism{s.L, s.t, true, "", });
    auto lhs = full.fixed_closure_polytope(F, s).vertices();
    auto rhs = preimage_closure(full, F, AM, FM, sM).vertices();
    if (lhs != rhs) return false;
    int dimS = static_cast<int>(basis_of(preimage_directions(AM, FM, sM), full.dim).size());
    return full.fixed_facet(F, s).dimension == dimS;
}

/**
 * Fixed-point bijection: F1 ↦ F1^ν maps the σ-stable faces of closure(F)
 * bijectively onto the faces of the polysimplex closure(F^ν).
 */
inline bool fixed_face_bijection(const Arrangement& A, const Facet& F, const AffineMap& s) {
    auto P = A.fixed_closure_polytope(F, s);
    auto verts = P.vertices();
    std::set<std::vector<Vec>> faces;
    for (const auto& f : P.faces(verts)) {
        std::vector<Vec> pts;
        for (int i : f) pts.push_back(verts[i]);
        std::sort(pts.begin(), pts.end());
        faces.insert(pts);
    }
    std::set<std::vector<Vec>> images;
    int stable = 0;
    for (const auto& rec : A.closure_facets(F)) {
        if (!A.stabilizes(s, rec.facet)) continue;
        ++stable;
        auto pts = A.fixed_closure_polytope(rec.facet, s).vertices();
        std::sort(pts.begin(), pts.end());
        if (!faces.count(pts)) return false;
        // Dimension of F1^ν matches the face it lands on.
        if (affine_dimension(pts) != A.fixed_facet(rec.facet, s).dimension) return false;
        images.insert(pts);
    }
    return static_cast<int>(images.size()) == stable && images.size() == faces.size();
}

/**
 * Automorphisms with linear part in a given list that fix the barycenter of
 * a facet of an arrangement, with translation chosen to fix that point.
 */
inline std::vector<ApartmentAutomorphism> stabilizer_battery(const Arrangement& A, const Facet& F, const std::vector<WeylElement>& linear) {
    const RootSystem& rs = *A.rs;
    Vec b = A.lift(A.barycenter(F));
    std::vector<ApartmentAutomorphism> out;
    for (const auto& w : linear) {
        ApartmentAutomorphism s;
        s.L = w.y;
        s.t = sub(b, w.y * b);
        s.g_compact = true;
        s.label = w.word.empty() ? "id" : w.word[0] == 'd' ? w.word : "w" + w.word;
        bool ok = true;
        for (int r = 0; r < rs.npos; ++r)
            if (!is_integer(rs.eval(r, s.t))) ok = false;
        if (!ok) continue;
        if (!A.is_full) {
            bool preserves = true;
            for (const auto& v : A.levi.subspace_basis)
                if (w.y * v != v) preserves = false;
            if (!preserves) continue;
            if (!A.stabilizes(A.induced(s), F)) continue;
        } else if (!A.stabilizes(s.as_map(), F)) {
            continue;
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace levelzero
