#pragma once

#include "levelzero/apartment.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace levelzero {

/**
 * A number that is either an exact rational or a Monte Carlo estimate with
 * a Hoeffding half-width. Sums of estimates add half-widths.
 */
struct Quantity {
    bool is_exact = true;
    Rational exact = 0;
    double approx = 0;
    double half_width = 0;
    long samples = 0;
    std::uint64_t seed = 0;

    static Quantity of(const Rational& q) {
        Quantity r;
        r.exact = q;
        r.approx = q.get_d();
        return r;
    }
    double value() const { return is_exact ? exact.get_d() : approx; }

    Quantity& operator+=(const Quantity& o) {
        if (is_exact && o.is_exact) {
            exact += o.exact;
            approx = exact.get_d();
        } else {
            approx = value() + o.value();
            is_exact = false;
            exact = 0;
        }
        half_width += o.half_width;
        samples += o.samples;
        if (!seed) seed = o.seed;
        return *this;
    }
    Quantity scaled(int sign) const {
        Quantity r = *this;
        r.exact *= sign;
        r.approx *= sign;
        return r;
    }
    Quantity times(const Quantity& o) const {
        if (is_exact && o.is_exact) return of(exact * o.exact);
        Quantity r;
        r.is_exact = false;
        r.approx = value() * o.value();
        r.half_width = std::abs(value()) * o.half_width + std::abs(o.value()) * half_width + half_width * o.half_width;
        r.samples = samples + o.samples;
        r.seed = seed ? seed : o.seed;
        return r;
    }
    /// Exact equality when both are exact, else agreement within `tol`.
    bool matches(const Quantity& o, double tol) const {
        if (is_exact && o.is_exact) return exact == o.exact;
        return std::abs(value() - o.value()) <= tol;
    }
    std::string str() const {
        if (is_exact) return exact.get_str();
        std::ostringstream os;
        os.precision(6);
        os << approx << "±" << half_width;
        return os.str();
    }
};

using SolidAngle = Quantity;

struct MonteCarloConfig {
    long samples = 2'000'000;
    std::uint64_t seed = 0xC0FFEE;
    double delta = 1e-3;  // Hoeffding failure probability per cone
};

/**
 * Open cone {w ∈ span(basis) : f(w) > 0 for every f in inequalities},
 * in simple-root coordinates with the given metric.
 */
struct ChamberCone {
    std::vector<Vec> basis;
    std::vector<Vec> inequalities;
    Mat metric;

    int dim() const { return static_cast<int>(basis.size()); }
    bool contains(const Vec& w) const {
        for (const auto& f : inequalities)
            if (dot(f, w) <= 0) return false;
        return in_span(basis, w, metric.rows);
    }
};

/// Chamber of a parabolic subset in 𝒜_M: α > 0 for α ∈ Σ(U_P).
inline ChamberCone chamber_of_parabolic(const RootSystem& rs, const ParabolicSubset& P) {
    ChamberCone C;
    C.basis = P.levi.subspace_basis;
    for (int r : P.positive_part) C.inequalities.push_back(rs.forms[r]);
    C.metric = rs.metric;
    return C;
}

/**
 * Cone attached to a pair F1 ⊂ closure(F) stabilized by s: inside the fixed
 * part of the direction space of F, the roots equal to a constant on F1 that
 * grow from F1 into F are positive.
 */
inline ChamberCone cone_of_triple(const Arrangement& A, const Facet& F1, const Facet& F, const AffineMap& s) {
    if (!A.is_full) throw std::invalid_argument("cone_of_triple: full apartment only");
    if (!A.closure_contains(F, F1)) throw std::invalid_argument("cone_of_triple: F1 is not in the closure of F");
    if (!A.stabilizes(s, F) || !A.stabilizes(s, F1)) throw std::invalid_argument("cone_of_triple: automorphism does not stabilize both facets");
    ChamberCone C;
    C.basis = A.fixed_directions(F, s);
    C.metric = A.metric;
    for (int i = 0; i < A.nroots(); ++i) {
        long k1 = F1.code[i], k = F.code[i];
        if (!Facet::is_eq(k1) || Facet::is_eq(k)) continue;
        long c = Facet::floor_part(k1);
        if (Facet::floor_part(k) == c)
            C.inequalities.push_back(A.forms[i]);
        else
            C.inequalities.push_back(scale(Rational(-1), A.forms[i]));
    }
    return C;
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
    return h;
}

/// Exact solid-angle fraction of a planar cone with rays r1, r2 (angle < π).
inline std::optional<Rational> planar_fraction(const Rational& cos2, bool obtuse) {
    static const std::vector<std::tuple<Rational, Rational, Rational>> table = {
        // cos², acute fraction, obtuse fraction
        {Rational(3, 4), Rational(1, 12), Rational(5, 12)},
        {Rational(1, 2), Rational(1, 8), Rational(3, 8)},
        {Rational(1, 4), Rational(1, 6), Rational(1, 3)},
    };
    if (cos2 == 0) return Rational(1, 4);
    for (const auto& [c, a, o] : table)
        if (cos2 == c) return obtuse ? o : a;
    return std::nullopt;
}

}  // namespace detail

/**
 * Fraction of the unit ball inside a cone. Exact in dimension ≤ 2 (planar
 * angles of crystallographic type), Monte Carlo otherwise.
 */
inline SolidAngle ball_fraction(const ChamberCone& C, const MonteCarloConfig& mc = {}) {
    int d = C.dim();
    if (d == 0) return Quantity::of(1);
    // Restrict inequalities to basis coordinates.
    std::vector<Vec> rf;
    for (const auto& f : C.inequalities) {
        Vec r(d);
        bool nz = false;
        for (int j = 0; j < d; ++j) {
            r[j] = dot(f, C.basis[j]);
            if (r[j] != 0) nz = true;
        }
        if (!nz) return Quantity::of(0);
        rf.push_back(r);
    }
    if (rf.empty()) return Quantity::of(1);
    Mat B = Mat::from_cols(C.basis, C.metric.rows);
    Mat gram = transpose(B) * C.metric * B;
    auto ip = [&](const Vec& a, const Vec& b) { return dot(a, gram * b); };

    if (d == 1) {
        bool pos = false, neg = false;
        for (const auto& r : rf) (r[0] > 0 ? pos : neg) = true;
        return Quantity::of(pos && neg ? Rational(0) : Rational(1, 2));
    }
    if (d == 2) {
        std::vector<Vec> rays;
        std::set<std::string> seen;
        for (const auto& r : rf) {
            Vec k{-r[1], r[0]};
            for (Rational sg : {Rational(1), Rational(-1)}) {
                Vec ray = scale(sg, k);
                bool ok = true;
                for (const auto& c : rf)
                    if (dot(c, ray) < 0) ok = false;
                if (!ok) continue;
                // Normalize direction for deduplication.
                Rational m = abs(ray[0]) > abs(ray[1]) ? Rational(abs(ray[0])) : Rational(abs(ray[1]));
                Vec nr = scale(1 / m, ray);
                if (seen.insert(vec_key(nr)).second) rays.push_back(nr);
            }
        }
        if (rays.size() == 2 && is_zero(add(rays[0], rays[1]))) {
            // All constraints share one kernel line: a half-plane iff they agree in sign.
            Vec w = rf[0];
            for (const auto& c : rf)
                if (dot(c, w) <= 0) return Quantity::of(0);
            return Quantity::of(Rational(1, 2));
        }
        if (rays.size() != 2) return Quantity::of(0);
        Vec w = add(rays[0], rays[1]);
        for (const auto& c : rf)
            if (dot(c, w) <= 0) return Quantity::of(0);
        Rational g12 = ip(rays[0], rays[1]);
        Rational cos2 = g12 * g12 / (ip(rays[0], rays[0]) * ip(rays[1], rays[1]));
        if (auto f = detail::planar_fraction(cos2, g12 < 0)) return Quantity::of(*f);
        long double c = std::sqrt(static_cast<long double>(cos2.get_d()));
        if (g12 < 0) c = -c;
        Quantity q;
        q.is_exact = false;
        q.approx = static_cast<double>(std::acos(c) / (2 * std::numbers::pi_v<long double>));
        q.half_width = 1e-15;
        return q;
    }

    // Orthonormal basis of the coefficient space for the metric.
    std::vector<std::vector<double>> g(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g[i][j] = gram(i, j).get_d();
    std::vector<std::vector<double>> on;
    for (int i = 0; i < d; ++i) {
        std::vector<double> v(d, 0.0);
        v[i] = 1;
        for (const auto& u : on) {
            double p = 0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) p += u[a] * g[a][b] * v[b];
            for (int a = 0; a < d; ++a) v[a] -= p * u[a];
        }
        double nn = 0;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) nn += v[a] * g[a][b] * v[b];
        nn = std::sqrt(nn);
        for (auto& x : v) x /= nn;
        on.push_back(v);
    }
    // Constraints in orthonormal coordinates.
    std::vector<std::vector<double>> cons;
    std::string key = std::to_string(d);
    for (const auto& r : rf) {
        std::vector<double> c(d, 0.0);
        for (int k = 0; k < d; ++k)
            for (int a = 0; a < d; ++a) c[k] += r[a].get_d() * on[k][a];
        cons.push_back(c);
        key += "|" + vec_key(r);
    }
    key += "|" + gram.key();
    std::uint64_t h = detail::fnv1a(key);
    std::seed_seq ss{static_cast<std::uint32_t>(mc.seed), static_cast<std::uint32_t>(mc.seed >> 32), static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    std::mt19937_64 rng(ss);
    std::normal_distribution<double> nd;
    long hits = 0;
    std::vector<double> xi(d);
    for (long s = 0; s < mc.samples; ++s) {
        for (auto& x : xi) x = nd(rng);
        bool in = true;
        for (const auto& c : cons) {
            double v = 0;
            for (int k = 0; k < d; ++k) v += c[k] * xi[k];
            if (v <= 0) {
                in = false;
                break;
            }
        }
        hits += in;
    }
    Quantity q;
    q.is_exact = false;
    q.approx = static_cast<double>(hits) / static_cast<double>(mc.samples);
    q.half_width = std::sqrt(std::log(2.0 / mc.delta) / (2.0 * static_cast<double>(mc.samples)));
    q.samples = mc.samples;
    q.seed = mc.seed;
    return q;
}

/// z(F1, F, σ): ball fraction of the chamber of the pair.
inline SolidAngle z_triple(const Arrangement& A, const Facet& F1, const Facet& F, const AffineMap& s, const MonteCarloConfig& mc = {}) {
    return ball_fraction(cone_of_triple(A, F1, F, s), mc);
}

/// (−1)^{dim F^ν}.
inline int fixed_sign(const Arrangement& A, const Facet& F, const AffineMap& s) {
    return A.fixed_directions(F, s).size() % 2 ? -1 : 1;
}

/// z_R(F, σ) = Σ over σ-stable F1 ⊂ closure(F) ∩ B_R of (−1)^{dim F1^ν} z(F1, F, σ).
inline Quantity z_R(const Arrangement& A, const Facet& F, const AffineMap& s, const Region& BR, const MonteCarloConfig& mc = {}) {
    if (!A.stabilizes(s, F)) throw std::invalid_argument("z_R: automorphism does not stabilize the facet");
    Quantity total = Quantity::of(0);
    for (const auto& rec : A.closure_facets(F)) {
        if (!BR.contains(*A.rs, rec.barycenter)) continue;
        if (A.facet_of_point(s.apply(rec.barycenter)) != rec.facet) continue;
        total += z_triple(A, rec.facet, F, s, mc).scaled(fixed_sign(A, rec.facet, s));
    }
    return total;
}

/// σ-stable facets around F1 sharing one fixed direction space, with their summed z(F1, F, σ).
struct PartitionGroup {
    std::vector<Vec> fixed_space;
    std::vector<Facet> facets;
    Quantity sum;
};

/// Canonical key of a subspace: its reduced row echelon form.
inline std::string span_key(const std::vector<Vec>& basis, int dim) {
    if (basis.empty()) return "0";
    Mat m = Mat::from_rows(basis, dim);
    int r = static_cast<int>(rref(m).size());
    std::string k;
    for (int i = 0; i < r; ++i) k += vec_key(m.row(i)) + ";";
    return k;
}

/**
 * Groups the σ-stable facets F of the star of F1 by the fixed part of their
 * direction space; within a group the cones tile that space, so each sum is 1.
 */
inline std::vector<PartitionGroup> partition_of_unity(const Arrangement& A, const Facet& F1, const AffineMap& s, const MonteCarloConfig& mc = {}) {
    if (!A.stabilizes(s, F1)) throw std::invalid_argument("partition_of_unity: automorphism does not stabilize the facet");
    std::map<std::string, PartitionGroup> groups;
    for (const auto& rec : star(A, F1)) {
        if (!A.stabilizes(s, rec.facet)) continue;
        auto V = A.fixed_directions(rec.facet, s);
        auto& g = groups[span_key(V, A.dim)];
        if (g.facets.empty()) {
            g.fixed_space = V;
            g.sum = Quantity::of(0);
        }
        g.facets.push_back(rec.facet);
        g.sum += z_triple(A, F1, rec.facet, s, mc);
    }
    std::vector<PartitionGroup> out;
    for (auto& [k, g] : groups) out.push_back(std::move(g));
    return out;
}

/// Default base facet: the facet of a fixed point of σ.
inline Facet default_base_facet(const Arrangement& A, const ApartmentAutomorphism& s) {
    auto p = solve(Mat::identity(A.dim) - s.L, s.t);
    if (!p) throw std::invalid_argument("automorphism has no fixed point");
    return A.facet_of_point(*p);
}

struct ApartmentKey {
    static std::string of(const AffineMap& s) { return s.L.key() + "#" + vec_key(s.t); }
};

/**
 * Enumerates the window B_{R+1} once and evaluates z_{N,R} for many
 * (P, F_M, σ). Facets F with z_R(F) ≠ 0 have a closure face in B_R, so
 * they lie in B_{R+1}.
 */
class ZHarness {
public:
    ArrangementPtr A;
    long N, R;
    Facet F_star;
    Region BR, window;
    std::vector<FacetRecord> facets;
    std::map<ParabolicSubset, std::vector<int>> by_class;
    MonteCarloConfig mc;

    ZHarness(ArrangementPtr arr, long N_, long R_, const Facet& base, MonteCarloConfig mcc = {})
        : A(std::move(arr)), N(N_), R(R_), F_star(base), mc(mcc) {
        BR = build_BR(*A, F_star, R);
        window = build_BR(*A, F_star, R + 1);
        facets = enumerate_facets(*A, window);
        for (int i = 0; i < static_cast<int>(facets.size()); ++i) by_class[classify_XN(*A->rs, facets[i].barycenter, N)].push_back(i);
    }

    Quantity zR(const Facet& F, const AffineMap& s) {
        std::string key = ApartmentKey::of(s);
        auto& memo = memo_[key];
        auto it = memo.find(F);
        if (it != memo.end()) return it->second;
        Quantity q = z_R(*A, F, s, BR, mc);
        memo.emplace(F, q);
        return q;
    }

    /// Y_N(P, F_M, σ) within the window.
    std::vector<Facet> Y(const ParabolicSubset& P, const Arrangement& AM, const Facet& F_M, const ApartmentAutomorphism& s) const {
        std::vector<Facet> out;
        auto it = by_class.find(P);
        if (it == by_class.end()) return out;
        auto m = s.as_map();
        for (int i : it->second) {
            const Facet& F = facets[i].facet;
            if (project_facet(*A, F, AM) != F_M) continue;
            if (A->facet_of_point(m.apply(facets[i].barycenter)) != F) continue;
            if (!AM.levi.contains(levi_of_twisted_facet(*A, F, m))) continue;
            out.push_back(F);
        }
        return out;
    }

    Quantity z_NR(const ParabolicSubset& P, const Arrangement& AM, const Facet& F_M, const ApartmentAutomorphism& s) {
        if (!(P.levi == AM.levi)) throw std::invalid_argument("z_NR: parabolic does not have Levi M");
        if (!s.g_compact) throw std::invalid_argument("z_NR: σ must be G-compact");
        if (!AM.stabilizes(AM.induced(s), F_M)) throw std::invalid_argument("z_NR: σ does not stabilize F_M");
        Quantity total = Quantity::of(0);
        auto m = s.as_map();
        for (const auto& F : Y(P, AM, F_M, s)) total += zR(F, m);
        return total;
    }

    /// Window facets whose projection to the M-apartment lies in the closure of F_M.
    std::vector<FacetRecord> over_closure(const Arrangement& AM, const Facet& F_M) {
        auto& idx = projections_[AM.levi.roots];
        if (idx.empty())
            for (int i = 0; i < static_cast<int>(facets.size()); ++i) idx[project_facet(*A, facets[i].facet, AM)].push_back(i);
        std::vector<FacetRecord> out;
        for (const auto& face : AM.closure_facets(F_M)) {
            auto it = idx.find(face.facet);
            if (it == idx.end()) continue;
            for (int i : it->second) out.push_back(facets[i]);
        }
        return out;
    }

private:
    std::map<std::string, std::map<Facet, Quantity>> memo_;
    std::map<std::vector<int>, std::map<Facet, std::vector<int>>> projections_;
};

/// True iff F_M lies in X^M_N(M).
inline bool in_XN_of_levi(const Arrangement& AM, const Facet& F_M, long N) {
    const RootSystem& rs = *AM.rs;
    Vec y = AM.lift(AM.barycenter(F_M));
    auto P = classify_XN_in(rs, AM.levi.roots, y, N);
    return P.positive_part.empty();
}

/// The value predicted for z_{N,R}(P, F_M, σ).
inline Quantity prop16_predicted(const ParabolicSubset& P, const Arrangement& AM, const Facet& F_M, const ApartmentAutomorphism& s, long N, const MonteCarloConfig& mc = {}) {
    const RootSystem& rs = *AM.rs;
    if (!in_XN_of_levi(AM, F_M, N)) return Quantity::of(0);
    if (AM.fixed_directions(F_M, AM.induced(s)).size() != 0) return Quantity::of(0);
    return ball_fraction(chamber_of_parabolic(rs, P), mc);
}

struct Prop16Case {
    ParabolicSubset P;
    ArrangementPtr AM;
    Facet F_M;
    ApartmentAutomorphism sigma;
    std::string label;
};

struct Prop16Result {
    Prop16Case config;
    Quantity computed, predicted, computed_next;
    bool in_XN = false;
    bool fixed_point = false;
    bool pass = false;
    bool stable = false;
};

inline std::string parabolic_label(const RootSystem& rs, const ParabolicSubset& P) {
    std::ostringstream os;
    os << "M{";
    for (std::size_t i = 0; i < P.levi.roots.size(); ++i) {
        int r = P.levi.roots[i];
        if (!rs.is_positive(r)) continue;
        os << (os.tellp() > 2 ? "," : "") << r;
    }
    os << "}U{";
    for (std::size_t i = 0; i < P.positive_part.size(); ++i) os << (i ? "," : "") << P.positive_part[i];
    os << "}";
    return os.str();
}

inline std::string facet_label(const Facet& F) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < F.code.size(); ++i) {
        long k = F.code[i];
        long c = Facet::floor_part(k);
        os << (i ? "," : "") << (Facet::is_eq(k) ? "=" : "~") << c;
    }
    os << "]";
    return os.str();
}

/// Weyl elements whose linear part fixes 𝒜_M pointwise (W^M).
inline std::vector<WeylElement> levi_weyl_group(const RootSystem& rs, const LeviSubset& M) {
    std::vector<WeylElement> out;
    for (const auto& w : weyl_group(rs)) {
        bool ok = true;
        for (const auto& v : M.subspace_basis)
            if (w.y * v != v) ok = false;
        if (ok) out.push_back(w);
    }
    return out;
}

/**
 * The Proposition 16 battery: every parabolic P; for M = torus the trivial
 * twist, for maximal M the vertices and edges with |root value| ≤ 8 under
 * W^M stabilizers, for M = G the facets of B_11 under their stabilizers.
 */
inline std::vector<Prop16Case> prop16_battery(RootSystemPtr rs) {
    std::vector<Prop16Case> out;
    auto A = Arrangement::full(rs);
    for (const auto& P : all_parabolics(*rs)) {
        auto AM = Arrangement::of_levi(rs, P.levi);
        auto WM = levi_weyl_group(*rs, P.levi);
        std::vector<Facet> FMs;
        if (AM->dim == 0) {
            FMs.push_back(AM->facet_of_point(Vec{}));
        } else if (AM->is_full) {
            Facet base = A->facet_of_point(zero_vec(rs->rank));
            for (const auto& rec : enumerate_facets(*A, build_BR(*A, base, 11))) FMs.push_back(rec.facet);
        } else {
            // Vertices and edges of the line App^M with root values in [-8, 9].
            Rational f0 = AM->forms[0][0];
            for (long h = -16; h <= 17; ++h) {
                Vec u{make_rational(h, 2) / f0};
                Facet f = AM->facet_of_point(u);
                if (std::find(FMs.begin(), FMs.end(), f) == FMs.end()) FMs.push_back(f);
            }
        }
        for (const auto& FM : FMs)
            for (const auto& s : stabilizer_battery(*AM, FM, WM))
                out.push_back({P, AM, FM, s, parabolic_label(*rs, P) + " " + facet_label(FM) + " " + s.label});
    }
    return out;
}

/// Runs the battery at R and R+5 with base facet the origin vertex.
inline std::vector<Prop16Result> prop16_verify(RootSystemPtr rs, const std::vector<Prop16Case>& cases, long N, long R, const MonteCarloConfig& mc = {}) {
    auto A = Arrangement::full(rs);
    Facet base = A->facet_of_point(zero_vec(rs->rank));
    ZHarness h1(A, N, R, base, mc), h2(A, N, R + 5, base, mc);
    std::vector<Prop16Result> out;
    double tol = 5e-3;
    for (const auto& c : cases) {
        Prop16Result r;
        r.config = c;
        r.computed = h1.z_NR(c.P, *c.AM, c.F_M, c.sigma);
        r.computed_next = h2.z_NR(c.P, *c.AM, c.F_M, c.sigma);
        r.predicted = prop16_predicted(c.P, *c.AM, c.F_M, c.sigma, N, mc);
        r.in_XN = in_XN_of_levi(*c.AM, c.F_M, N);
        r.fixed_point = c.AM->fixed_directions(c.F_M, c.AM->induced(c.sigma)).empty();
        r.stable = r.computed.matches(r.computed_next, tol);
        r.pass = r.computed.matches(r.predicted, tol) && r.stable;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Euler-characteristic probe of the cancellation argument.

/**
 * Data of one (P, F_M, σ) with F_M ⊂ X^M_N(M): the polysimplex closure of
 * F_M^ν per simple factor of Σ^M, the base Δ, and the Levi L = M_{F_M,ν}.
 */
struct ProbeSetup {
    ArrangementPtr A;
    ArrangementPtr AM;
    ParabolicSubset P;
    Facet F_M;
    ApartmentAutomorphism sigma;
    AffineMap sigma_M;
    long N = 0, R = 0;
    Region BR;
    LeviSubset L;
    std::vector<std::vector<int>> factor_coords;   // M-apartment coordinates of each factor
    std::vector<std::vector<Vec>> factor_vertices; // s_{i,l}, in factor coordinates
    std::vector<int> delta_outside;                // Δ − Δ^M
};

struct ProbeCell {
    std::vector<int> J;  // global indices into the concatenated factor vertex list
    std::vector<int> D;  // roots
    bool nonempty = false;
    int euler = 0;
    int members = 0;
    bool convex = true;
    int convexity_samples = 0;
};

struct ProbeResult {
    std::string label;
    std::vector<ParabolicSubset> Qs;
    std::vector<ProbeCell> cells;
    Quantity decomposition;  // Σ_Q frac(C_Q) Σ_{J,D} ± Z[J,D]
    bool pass = true;
};

inline ProbeSetup make_probe_setup(ArrangementPtr A, const Prop16Case& c, long N, long R) {
    const RootSystem& rs = *A->rs;
    ProbeSetup S;
    S.A = A;
    S.AM = c.AM;
    S.P = c.P;
    S.F_M = c.F_M;
    S.sigma = c.sigma;
    S.sigma_M = c.AM->induced(c.sigma);
    S.N = N;
    S.R = R;
    S.BR = build_BR(*A, A->facet_of_point(zero_vec(rs.rank)), R);
    S.L = levi_of_twisted_facet(*c.AM, c.F_M, S.sigma_M);
    const Arrangement& AM = *c.AM;
    // Factors of Σ^M by connected components of its base.
    auto comps = components_of(rs, AM.simple);
    auto verts = AM.vertices(c.F_M);
    for (const auto& comp : comps) {
        std::vector<int> coords;
        for (int r : comp) coords.push_back(static_cast<int>(std::find(AM.simple.begin(), AM.simple.end(), r) - AM.simple.begin()));
        std::sort(coords.begin(), coords.end());
        // The twist must preserve the factor.
        for (int i = 0; i < AM.dim; ++i)
            for (int j : coords)
                if (S.sigma_M.L(i, j) != 0 && std::find(coords.begin(), coords.end(), i) == coords.end())
                    throw std::invalid_argument("euler probe: twist permutes simple factors");
        std::vector<Vec> fv;
        std::set<std::string> seen;
        for (const auto& v : verts) {
            Vec p;
            for (int j : coords) p.push_back(v[j]);
            if (seen.insert(vec_key(p)).second) fv.push_back(p);
        }
        // σ orbits on factor vertices.
        auto restrict = [&](const Vec& p) {
            Vec full = zero_vec(AM.dim);
            for (std::size_t a = 0; a < coords.size(); ++a) full[coords[a]] = p[a];
            Vec img = S.sigma_M.apply(full);
            Vec out;
            for (int j : coords) out.push_back(img[j]);
            return out;
        };
        std::vector<bool> used(fv.size(), false);
        std::vector<Vec> bary;
        for (std::size_t i = 0; i < fv.size(); ++i) {
            if (used[i]) continue;
            std::vector<Vec> orbit;
            Vec cur = fv[i];
            while (true) {
                auto it = std::find(fv.begin(), fv.end(), cur);
                std::size_t k = static_cast<std::size_t>(it - fv.begin());
                if (used[k]) break;
                used[k] = true;
                orbit.push_back(cur);
                cur = restrict(cur);
            }
            bary.push_back(centroid(orbit));
        }
        S.factor_coords.push_back(coords);
        S.factor_vertices.push_back(bary);
    }
    // Base Δ: Σ^M positive on the closure of F_M, extended by Σ(U_P).
    Vec y = AM.lift(AM.barycenter(c.F_M));
    std::vector<int> MR;
    for (int r : AM.levi.roots) MR.push_back(r);
    auto posM = positive_system(rs, MR, y, generic_vector(rs));
    std::vector<int> pos = posM;
    for (int r : c.P.positive_part) pos.push_back(r);
    std::sort(pos.begin(), pos.end());
    for (int a : simple_roots_of(rs, pos))
        if (!AM.levi.contains_root(a)) S.delta_outside.push_back(a);
    return S;
}

/// Barycentric coordinates of a factor point with respect to the factor simplex; nullopt off its affine span.
inline std::optional<Vec> factor_barycentric(const std::vector<Vec>& s, const Vec& p) {
    int k = static_cast<int>(s.size());
    int d = static_cast<int>(p.size());
    // Σ μ_i s_i = p, Σ μ_i = 1.
    Mat A(d + 1, k);
    Vec b(d + 1);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < d; ++j) A(j, i) = s[i][j];
        A(d, i) = 1;
    }
    for (int j = 0; j < d; ++j) b[j] = p[j];
    b[d] = 1;
    return solve(A, b);
}

inline int probe_vertex_count(const ProbeSetup& S) {
    int n = 0;
    for (const auto& f : S.factor_vertices) n += static_cast<int>(f.size());
    return n;
}

/// Exact membership in E[J, D].
inline bool in_E(const ProbeSetup& S, const std::vector<int>& J, const std::vector<int>& D, const Vec& y) {
    const RootSystem& rs = *S.A->rs;
    Vec u = S.AM->project(y);
    int offset = 0;
    for (std::size_t l = 0; l < S.factor_coords.size(); ++l) {
        Vec p;
        for (int j : S.factor_coords[l]) p.push_back(u[j]);
        auto mu = factor_barycentric(S.factor_vertices[l], p);
        if (!mu) return false;
        for (std::size_t i = 0; i < mu->size(); ++i) {
            int g = offset + static_cast<int>(i);
            bool inJ = std::find(J.begin(), J.end(), g) != J.end();
            if ((*mu)[i] < 0) return false;
            if (inJ && (*mu)[i] != 0) return false;
        }
        offset += static_cast<int>(S.factor_vertices[l].size());
    }
    if (!S.BR.contains(rs, y)) return false;
    for (int a : S.delta_outside) {
        Rational v = rs.eval(a, y);
        bool inD = std::find(D.begin(), D.end(), a) != D.end();
        if (inD ? v != S.N : v < S.N) return false;
    }
    return true;
}

/// E[J, D] as a polytope; used to decide emptiness independently of the facet sum.
inline Polytope E_polytope(const ProbeSetup& S, const std::vector<int>& J, const std::vector<int>& D) {
    const RootSystem& rs = *S.A->rs;
    int n = rs.rank;
    std::vector<Vec> eq;
    Vec rhs;
    std::vector<HalfSpace> hs;
    const Mat& Pm = S.AM->projection;
    int offset = 0;
    for (std::size_t l = 0; l < S.factor_coords.size(); ++l) {
        const auto& s = S.factor_vertices[l];
        const auto& coords = S.factor_coords[l];
        int k = static_cast<int>(s.size());
        int d = static_cast<int>(coords.size());
        // Factor coordinates as linear forms in y.
        std::vector<Vec> fy;
        for (int j : coords) fy.push_back(Pm.row(j));
        // μ as affine functions of the factor point: solve via left inverse on the span of s_i − s_0.
        std::vector<Vec> dirs;
        for (int i = 1; i < k; ++i) dirs.push_back(sub(s[i], s[0]));
        // Constraints on the complement of the span.
        for (const auto& nrm : common_kernel(dirs, d)) {
            Vec f = zero_vec(n);
            for (int j = 0; j < d; ++j) f = add(f, scale(nrm[j], fy[j]));
            eq.push_back(f);
            rhs.push_back(dot(nrm, s[0]));
        }
        // Left inverse: (Dᵀ D)^{-1} Dᵀ with the Euclidean pairing of coordinates.
        std::vector<Vec> mu_forms(k, zero_vec(n));
        std::vector<Rational> mu_const(k, Rational(0));
        if (k > 1) {
            Mat Dm = Mat::from_cols(dirs, d);
            Mat DtD = transpose(Dm) * Dm;
            Mat Linv = *inverse(DtD) * transpose(Dm);
            for (int i = 1; i < k; ++i) {
                Vec row = Linv.row(i - 1);
                Vec f = zero_vec(n);
                for (int j = 0; j < d; ++j) f = add(f, scale(row[j], fy[j]));
                mu_forms[i] = f;
                mu_const[i] = -dot(row, s[0]);
            }
            mu_forms[0] = zero_vec(n);
            mu_const[0] = 1;
            for (int i = 1; i < k; ++i) {
                mu_forms[0] = sub(mu_forms[0], mu_forms[i]);
                mu_const[0] -= mu_const[i];
            }
        } else {
            mu_const[0] = 1;
        }
        for (int i = 0; i < k; ++i) {
            int g = offset + i;
            if (std::find(J.begin(), J.end(), g) != J.end()) {
                if (is_zero(mu_forms[i])) {
                    // Constant 1 ≠ 0: empty. Encode as an inconsistent equation.
                    eq.push_back(zero_vec(n));
                    rhs.push_back(1);
                } else {
                    eq.push_back(mu_forms[i]);
                    rhs.push_back(-mu_const[i]);
                }
            } else if (!is_zero(mu_forms[i])) {
                hs.push_back({mu_forms[i], -mu_const[i]});
            }
        }
        offset += k;
    }
    for (int a : S.delta_outside) {
        if (std::find(D.begin(), D.end(), a) != D.end()) {
            eq.push_back(rs.forms[a]);
            rhs.push_back(Rational(S.N));
        } else {
            hs.push_back({rs.forms[a], Rational(S.N)});
        }
    }
    auto box = S.BR.closure_polytope(rs);
    for (const auto& h : box.halfspaces) hs.push_back(h);
    Polytope P;
    P.space = affine_solutions(Mat::from_rows(eq, n), rhs);
    P.halfspaces = hs;
    return P;
}

/**
 * For each Q ∈ P(L) and each J ⊂ I_Q, D ⊂ Δ_P[Q]: the Euler sum
 * Σ (−1)^{dim F^ν} over σ-stable F ⊂ B_R with F^ν ⊂ E[J, D], emptiness of
 * E[J, D], and random midpoint convexity checks.
 */
inline ProbeResult euler_convexity_probe(const ProbeSetup& S, const std::vector<FacetRecord>& window_facets, std::uint64_t seed, int convexity_pairs = 200,
                                         const MonteCarloConfig& mc = {}) {
    const RootSystem& rs = *S.A->rs;
    const Arrangement& A = *S.A;
    ProbeResult out;
    auto m = S.sigma.as_map();
    std::mt19937_64 rng(seed);

    // Candidate pieces F^ν: σ-stable facets in B_R projecting into closure(F_M).
    struct Piece {
        Facet F;
        int sign;
        Vec point;
        std::vector<Vec> orbit_bary;
    };
    std::vector<Piece> pieces;
    for (const auto& rec : window_facets) {
        if (!S.BR.contains(rs, rec.barycenter)) continue;
        if (A.facet_of_point(m.apply(rec.barycenter)) != rec.facet) continue;
        if (!S.AM->closure_contains(S.F_M, project_facet(A, rec.facet, *S.AM))) continue;
        auto X = A.fixed_facet(rec.facet, m);
        bool ok = true;
        for (int a : S.delta_outside)
            if (rs.eval(a, X.point) < S.N) ok = false;
        if (!ok) continue;
        pieces.push_back({rec.facet, X.dimension % 2 ? -1 : 1, X.point, X.orbit_barycenters});
    }

    // I_l index ranges.
    std::vector<std::pair<int, int>> ranges;
    int off = 0;
    for (const auto& f : S.factor_vertices) {
        ranges.push_back({off, off + static_cast<int>(f.size())});
        off += static_cast<int>(f.size());
    }

    out.decomposition = Quantity::of(0);
    std::vector<Vec> Lbasis = S.L.subspace_basis;
    for (const auto& Q : parabolics_with_levi(rs, S.L)) {
        out.Qs.push_back(Q);
        // Generic ρ_Q in C_Q.
        Vec rho;
        std::uniform_int_distribution<int> pert(-50, 50);
        for (int attempt = 0;; ++attempt) {
            Vec r = Q.interior;
            if (attempt > 0)
                for (const auto& b : Lbasis) r = add(r, scale(Rational(pert(rng), 1000), b));
            bool ok = true;
            for (int a : Q.positive_part)
                if (rs.eval(a, r) <= 0) ok = false;
            for (int a = 0; a < rs.size() && ok; ++a)
                if (!S.L.contains_root(a) && rs.eval(a, r) == 0) ok = false;
            if (!ok) continue;
            // λ per factor must be nonzero where the factor simplex has ≥ 2 vertices.
            Vec rM = S.AM->projection * r;
            bool lam_ok = true;
            for (std::size_t l = 0; l < S.factor_coords.size() && lam_ok; ++l) {
                const auto& s = S.factor_vertices[l];
                if (s.size() < 2) continue;
                Vec p;
                for (int j : S.factor_coords[l]) p.push_back(rM[j]);
                // Σ λ_i s_i = p with Σ λ_i = 0.
                int k = static_cast<int>(s.size()), d = static_cast<int>(p.size());
                Mat Am(d + 1, k);
                Vec b(d + 1);
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < d; ++j) Am(j, i) = s[i][j];
                    Am(d, i) = 1;
                }
                for (int j = 0; j < d; ++j) b[j] = p[j];
                b[d] = 0;
                auto lam = solve(Am, b);
                if (!lam) throw std::logic_error("euler probe: ρ_Q outside the polysimplex directions");
                for (const auto& x : *lam)
                    if (x == 0) lam_ok = false;
            }
            if (lam_ok) {
                rho = r;
                break;
            }
            if (attempt > 10000) throw std::runtime_error("euler probe: no generic ρ_Q found");
        }
        // I_Q.
        std::vector<int> IQ;
        Vec rM = S.AM->projection * rho;
        for (std::size_t l = 0; l < S.factor_coords.size(); ++l) {
            const auto& s = S.factor_vertices[l];
            if (s.size() == 1) {
                IQ.push_back(ranges[l].first);
                continue;
            }
            Vec p;
            for (int j : S.factor_coords[l]) p.push_back(rM[j]);
            int k = static_cast<int>(s.size()), d = static_cast<int>(p.size());
            Mat Am(d + 1, k);
            Vec b(d + 1);
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < d; ++j) Am(j, i) = s[i][j];
                Am(d, i) = 1;
            }
            for (int j = 0; j < d; ++j) b[j] = p[j];
            b[d] = 0;
            auto lam = *solve(Am, b);
            for (int i = 0; i < k; ++i)
                if (lam[i] < 0) IQ.push_back(ranges[l].first + i);
        }
        std::vector<int> DPQ;
        for (int a : S.delta_outside)
            if (rs.eval(a, rho) < 0) DPQ.push_back(a);

        Quantity fracQ = ball_fraction(chamber_of_parabolic(rs, Q), mc);
        long ZQ = 0;
        int nJ = static_cast<int>(IQ.size()), nD = static_cast<int>(DPQ.size());
        for (unsigned jm = 0; jm < (1u << nJ); ++jm)
            for (unsigned dm = 0; dm < (1u << nD); ++dm) {
                ProbeCell cell;
                for (int i = 0; i < nJ; ++i)
                    if (jm & (1u << i)) cell.J.push_back(IQ[i]);
                for (int i = 0; i < nD; ++i)
                    if (dm & (1u << i)) cell.D.push_back(DPQ[i]);
                cell.nonempty = !E_polytope(S, cell.J, cell.D).vertices().empty();
                std::vector<const Piece*> members;
                for (const auto& pc : pieces)
                    if (in_E(S, cell.J, cell.D, pc.point)) {
                        members.push_back(&pc);
                        cell.euler += pc.sign;
                    }
                cell.members = static_cast<int>(members.size());
                // Midpoint convexity on random points of closures of member pieces.
                if (!members.empty()) {
                    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
                    std::uniform_int_distribution<int> wt(1, 97);
                    auto sample = [&](const Piece& pc) {
                        Vec x = zero_vec(rs.rank);
                        Rational tot = 0;
                        for (const auto& b : pc.orbit_bary) {
                            Rational w(wt(rng));
                            x = add(x, scale(w, b));
                            tot += w;
                        }
                        return scale(1 / tot, x);
                    };
                    for (int t = 0; t < convexity_pairs; ++t) {
                        Vec a = sample(*members[pick(rng)]);
                        Vec b = sample(*members[pick(rng)]);
                        Vec mid = scale(Rational(1, 2), add(a, b));
                        ++cell.convexity_samples;
                        if (!in_E(S, cell.J, cell.D, a) || !in_E(S, cell.J, cell.D, b) || !in_E(S, cell.J, cell.D, mid)) cell.convex = false;
                    }
                }
                bool ok = cell.nonempty ? (cell.euler == 1 && cell.convex) : (cell.euler == 0 && cell.members == 0);
                if (!ok) out.pass = false;
                int sg = ((cell.J.size() + cell.D.size()) % 2) ? -1 : 1;
                ZQ += sg * cell.euler;
                out.cells.push_back(cell);
            }
        out.decomposition += fracQ.times(Quantity::of(Rational(ZQ)));
    }
    return out;
}

}  // namespace levelzero
