#pragma once
// Brute-force reference implementations used by the tests. They share no
// code with the library beyond the root data and the matrix code format.

#include "levelzero/suites.hpp"

#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using levelzero::Rational;

// ---------------------------------------------------------------------------
// GL_n(F_q) by direct enumeration of matrices.

using Matrix = std::vector<int>;  // row-major, entries mod q

struct BruteGL {
    int n, q;
    std::vector<Matrix> elements;
    std::map<Matrix, int> index;
    std::vector<int> inverse_of;
    std::vector<int> class_of;
    int nclasses = 0;

    BruteGL(int n_, int q_) : n(n_), q(q_) {
        long total = 1;
        for (int i = 0; i < n * n; ++i) total *= q;
        for (long c = 0; c < total; ++c) {
            Matrix m(n * n);
            long x = c;
            for (int i = 0; i < n * n; ++i) {
                m[i] = static_cast<int>(x % q);
                x /= q;
            }
            if (det(m) != 0) {
                index[m] = static_cast<int>(elements.size());
                elements.push_back(m);
            }
        }
        Matrix id(n * n, 0);
        for (int i = 0; i < n; ++i) id[i * n + i] = 1;
        inverse_of.resize(elements.size());
        for (std::size_t a = 0; a < elements.size(); ++a)
            for (std::size_t b = 0; b < elements.size(); ++b)
                if (mul(elements[a], elements[b]) == id) inverse_of[a] = static_cast<int>(b);
        class_of.assign(elements.size(), -1);
        for (std::size_t g = 0; g < elements.size(); ++g) {
            if (class_of[g] >= 0) continue;
            for (const auto& x : elements) class_of[index.at(mul(mul(x, elements[g]), inverse(x)))] = nclasses;
            ++nclasses;
        }
    }

    int order() const { return static_cast<int>(elements.size()); }

    Matrix mul(const Matrix& a, const Matrix& b) const {
        Matrix c(n * n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int s = 0;
                for (int k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
                c[i * n + j] = s % q;
            }
        return c;
    }

    int inv_mod(int a) const {
        for (int b = 1; b < q; ++b)
            if (a * b % q == 1) return b;
        return 0;
    }

    int det(Matrix m) const {
        int d = 1;
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int r = c; r < n; ++r)
                if (m[r * n + c]) p = r;
            if (p < 0) return 0;
            if (p != c) {
                for (int k = 0; k < n; ++k) std::swap(m[p * n + k], m[c * n + k]);
                d = (q - d) % q;
            }
            d = d * m[c * n + c] % q;
            int iv = inv_mod(m[c * n + c]);
            for (int r = c + 1; r < n; ++r) {
                int f = m[r * n + c] * iv % q;
                for (int k = 0; k < n; ++k) m[r * n + k] = ((m[r * n + k] - f * m[c * n + k]) % q + q) % q;
            }
        }
        return d;
    }

    Matrix inverse(const Matrix& a) const { return elements[inverse_of[index.at(a)]]; }

    long code(const Matrix& m) const {
        long c = 0;
        for (int i = n * n - 1; i >= 0; --i) c = c * q + m[i];
        return c;
    }

    static int block(const std::vector<int>& mu, int i) {
        for (std::size_t b = 0; b < mu.size(); ++b) {
            if (i < mu[b]) return static_cast<int>(b);
            i -= mu[b];
        }
        return -1;
    }
    /// Block upper triangular for μ.
    bool in_parabolic(const Matrix& m, const std::vector<int>& mu) const {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m[i * n + j] && block(mu, i) > block(mu, j)) return false;
        return true;
    }
    Matrix levi_part(const Matrix& m, const std::vector<int>& mu) const {
        Matrix l = m;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (block(mu, i) != block(mu, j)) l[i * n + j] = 0;
        return l;
    }
    bool in_levi(const Matrix& m, const std::vector<int>& mu) const { return levi_part(m, mu) == m; }
    bool in_unipotent(const Matrix& m, const std::vector<int>& mu) const {
        if (!in_parabolic(m, mu)) return false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (block(mu, i) == block(mu, j) && m[i * n + j] != (i == j ? 1 : 0)) return false;
        return true;
    }

    /// Number of F_q-lines fixed by g.
    int fixed_lines(const Matrix& g) const {
        std::set<std::vector<int>> lines;
        long total = 1;
        for (int i = 0; i < n; ++i) total *= q;
        for (long c = 1; c < total; ++c) {
            std::vector<int> v(n);
            long x = c;
            for (int i = 0; i < n; ++i) {
                v[i] = static_cast<int>(x % q);
                x /= q;
            }
            // Normalize: first nonzero entry 1.
            int lead = 0;
            while (!v[lead]) ++lead;
            if (v[lead] != 1) continue;
            std::vector<int> w(n, 0);
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) w[i] = (w[i] + g[i * n + k] * v[k]) % q;
            int wl = 0;
            while (!w[wl]) ++wl;
            int s = inv_mod(w[wl]);
            for (auto& e : w) e = e * s % q;
            if (w == v) lines.insert(v);
        }
        return static_cast<int>(lines.size());
    }
};

/// Class function on the whole group or a Levi, stored per element of that subgroup.
using ElementFunction = std::map<Matrix, Rational>;

inline std::vector<std::vector<int>> compositions(int n) {
    if (n == 0) return {{}};
    std::vector<std::vector<int>> out;
    for (int first = 1; first <= n; ++first)
        for (auto rest : compositions(n - first)) {
            rest.insert(rest.begin(), first);
            out.push_back(rest);
        }
    return out;
}

/// Compositions refining the block structure mu (each block split further).
inline std::vector<std::vector<int>> refinements(const std::vector<int>& mu) {
    std::vector<std::vector<int>> out{{}};
    for (int b : mu) {
        std::vector<std::vector<int>> next;
        for (const auto& pre : out)
            for (const auto& c : compositions(b)) {
                auto v = pre;
                v.insert(v.end(), c.begin(), c.end());
                next.push_back(v);
            }
        out = next;
    }
    return out;
}

/// |N(M_μ)/M_μ| for GL_n: permutations of blocks of equal size.
inline long relative_weyl(const std::vector<int>& mu) {
    std::map<int, int> mult;
    for (int b : mu) ++mult[b];
    long r = 1;
    for (auto [size, k] : mult)
        for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

struct BruteHarishChandra {
    const BruteGL& G;

    std::vector<Matrix> levi_elements(const std::vector<int>& mu) const {
        std::vector<Matrix> out;
        for (const auto& g : G.elements)
            if (G.in_levi(g, mu)) out.push_back(g);
        return out;
    }
    std::vector<Matrix> unipotent(const std::vector<int>& mu) const {
        std::vector<Matrix> out;
        for (const auto& g : G.elements)
            if (G.in_unipotent(g, mu)) out.push_back(g);
        return out;
    }

    /// Restriction from the Levi of λ to the Levi of a refinement μ.
    ElementFunction res(const ElementFunction& f, const std::vector<int>& lambda, const std::vector<int>& mu) const {
        // Unipotent radical of P_μ ∩ M_λ.
        std::vector<Matrix> U;
        for (const auto& u : unipotent(mu))
            if (G.in_levi(u, lambda)) U.push_back(u);
        ElementFunction out;
        for (const auto& m : levi_elements(mu)) {
            Rational s = 0;
            for (const auto& u : U) s += f.at(G.mul(m, u));
            out[m] = s / static_cast<long>(U.size());
        }
        return out;
    }

    /// Induction from the Levi of μ to the Levi of λ through the block upper parabolic.
    ElementFunction ind(const ElementFunction& h, const std::vector<int>& lambda, const std::vector<int>& mu) const {
        auto L = levi_elements(lambda);
        long P = 0;
        for (const auto& x : L) P += G.in_parabolic(x, mu);
        ElementFunction out;
        for (const auto& g : L) {
            Rational s = 0;
            for (const auto& x : L) {
                Matrix y = G.mul(G.mul(G.inverse(x), g), x);
                if (G.in_parabolic(y, mu)) s += h.at(G.levi_part(y, mu));
            }
            out[g] = s / P;
        }
        return out;
    }

    /// Cuspidal projection on the Levi of λ, by the recursion over proper standard Levis up to block reordering.
    ElementFunction proj_cusp(const ElementFunction& f, const std::vector<int>& lambda) const {
        ElementFunction r = f;
        std::set<std::vector<std::vector<int>>> seen;
        for (const auto& mu : refinements(lambda)) {
            if (mu == lambda) continue;
            // Levis are conjugate in M_λ iff each λ-block has the same multiset of sub-block sizes.
            std::vector<std::vector<int>> key;
            std::size_t pos = 0;
            for (int b : lambda) {
                std::vector<int> part;
                int acc = 0;
                while (acc < b) {
                    part.push_back(mu[pos]);
                    acc += mu[pos++];
                }
                std::sort(part.begin(), part.end());
                key.push_back(part);
            }
            if (!seen.insert(key).second) continue;
            long w = 1;
            for (const auto& part : key) w *= relative_weyl(part);
            auto term = ind(proj_cusp(res(f, lambda, mu), mu), lambda, mu);
            for (auto& [g, v] : r) v -= term.at(g) / w;
        }
        return r;
    }
};

/// Lifts a per-class vector of the library onto brute-force elements.
inline ElementFunction on_elements(const BruteGL& G, const levelzero::ClassFunction& f) {
    ElementFunction out;
    for (const auto& g : G.elements) out[g] = f.at_code(G.code(g));
    return out;
}

// ---------------------------------------------------------------------------
// Apartment oracles.

/// Facet codes of the points of a rational grid of step 1/den inside |α(y)| ≤ R.
inline std::map<std::vector<long>, int> grid_facets(const levelzero::RootSystem& rs, long R, long den) {
    std::map<std::vector<long>, int> out;
    int r = rs.rank;
    std::vector<long> k(r, -R * den);
    while (true) {
        levelzero::Vec y(r);
        for (int i = 0; i < r; ++i) y[i] = levelzero::make_rational(k[i], den);
        bool inside = true;
        std::vector<long> code(rs.npos);
        std::vector<levelzero::Vec> tight;
        for (int a = 0; a < rs.npos && inside; ++a) {
            Rational v = 0;
            for (int i = 0; i < r; ++i) v += rs.forms[a][i] * y[i];
            if (abs(v) > R) inside = false;
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
            bool integral = v.get_den() == 1;
            code[a] = 2 * fl.get_si() + (integral ? 0 : 1);
            if (integral) tight.push_back(rs.forms[a]);
        }
        if (inside) out[code] = r - levelzero::rank_of_rows(tight, r);
        int i = 0;
        while (i < r && ++k[i] > R * den) k[i++] = -R * den;
        if (i == r) break;
    }
    return out;
}

/// X'_N membership straight from the definition: every root of Σ(U_P) exceeds N.
inline bool in_stratum_closure(const levelzero::RootSystem& rs, const levelzero::ParabolicSubset& P, const levelzero::Vec& y, long N) {
    for (int a : P.positive_part) {
        Rational v = 0;
        for (int i = 0; i < rs.rank; ++i) v += rs.forms[a][i] * y[i];
        if (v <= N) return false;
    }
    return true;
}

/// Inclusion-minimal parabolics with y in X'_N, scanning every parabolic.
inline std::vector<levelzero::ParabolicSubset> minimal_by_scan(const levelzero::RootSystem& rs, const levelzero::Vec& y, long N) {
    std::vector<levelzero::ParabolicSubset> hits, out;
    for (const auto& P : levelzero::all_parabolics(rs))
        if (in_stratum_closure(rs, P, y, N)) hits.push_back(P);
    for (const auto& P : hits) {
        bool minimal = true;
        for (const auto& Q : hits)
            if (!(Q == P) && P.contains(Q)) minimal = false;
        if (minimal) out.push_back(P);
    }
    return out;
}

/**
 * Facets F for which F ∩ p_M^{-1}(F_M^ν) is open and nonempty in the
 * preimage, found by classifying generic grid points of the preimage that
 * fall in `region`. Pieces narrower than the grid step can be missed.
 */
inline std::set<levelzero::Facet> open_preimage_facets_by_sampling(const levelzero::Arrangement& full, const levelzero::Arrangement& AM, const levelzero::Facet& F_M,
                                                                    const levelzero::AffineMap& sM, const levelzero::Region& region, long span, long steps) {
    using namespace levelzero;
    auto dirs = basis_of(preimage_directions(AM, F_M, sM), full.dim);
    auto fixed_pts = AM.fixed_closure_polytope(F_M, sM).vertices();
    Vec base = full.dim ? AM.lift(centroid(fixed_pts)) : Vec{};
    std::set<Facet> out;
    int k = static_cast<int>(dirs.size());
    // Irrational-like offsets keep grid points off every wall.
    const Rational offsets[3] = {Rational(1, 101), Rational(3, 211), Rational(7, 401)};
    std::vector<long> idx(k, -span * steps);
    while (true) {
        Vec x = base;
        for (int j = 0; j < k; ++j) x = add(x, scale(levelzero::make_rational(idx[j], steps) + offsets[j], dirs[j]));
        if (region.contains(*full.rs, x)) {
            Vec u = AM.project(x);
            if (AM.facet_of_point(u) == F_M && sM.apply(u) == u) out.insert(full.facet_of_point(x));
        }
        int j = 0;
        while (j < k && ++idx[j] > span * steps) idx[j++] = -span * steps;
        if (j == k) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Random generators for property tests.

inline Rational random_rational(std::mt19937_64& rng, long max_num = 9, long max_den = 6) {
    std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
    return levelzero::make_rational(num(rng), den(rng));
}

inline levelzero::ClassFunction random_class_function(std::mt19937_64& rng, const levelzero::SpacePtr& S) {
    auto f = levelzero::zero_function(S);
    for (auto& v : f.values) v = random_rational(rng);
    return f;
}

inline levelzero::Vec random_point(std::mt19937_64& rng, int rank, long bound, long max_den = 12) {
    levelzero::Vec y(rank);
    std::uniform_int_distribution<long> den(1, max_den);
    for (auto& c : y) {
        long d = den(rng);
        std::uniform_int_distribution<long> num(-bound * d, bound * d);
        c = levelzero::make_rational(num(rng), d);
    }
    return y;
}

}  // namespace oracle
