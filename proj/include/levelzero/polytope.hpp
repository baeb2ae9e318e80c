#pragma once

#include "levelzero/linalg.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace levelzero {

/** Affine subspace p0 + span(basis); `empty` when the defining equations are inconsistent. */
struct AffineSubspace {
    bool empty = false;
    Vec p0;
    std::vector<Vec> basis;

    int dimension() const { return empty ? -1 : static_cast<int>(basis.size()); }
    Vec at(const Vec& w) const {
        Vec x = p0;
        for (std::size_t j = 0; j < basis.size(); ++j) x = add(x, scale(w[j], basis[j]));
        return x;
    }
};

/// Solution set of A x = b.
inline AffineSubspace affine_solutions(const Mat& A, const Vec& b) {
    AffineSubspace S;
    if (A.rows == 0) {
        S.p0 = zero_vec(A.cols);
        S.basis = common_kernel({}, A.cols);
        return S;
    }
    auto p = solve(A, b);
    if (!p) {
        S.empty = true;
        return S;
    }
    S.p0 = *p;
    S.basis = kernel(A);
    return S;
}

/** Half-space form(x) >= c. */
struct HalfSpace {
    Vec form;
    Rational c;
};

/**
 * Bounded polytope: an affine subspace intersected with closed half-spaces.
 *
 * Vertices are found by solving every nondegenerate choice of tight
 * half-spaces; faces are identified by their tight sets.
 */
struct Polytope {
    AffineSubspace space;
    std::vector<HalfSpace> halfspaces;

    bool contains(const Vec& x) const {
        for (const auto& h : halfspaces)
            if (dot(h.form, x) < h.c) return false;
        return true;
    }

    std::vector<int> tight_set(const Vec& x) const {
        std::vector<int> t;
        for (std::size_t i = 0; i < halfspaces.size(); ++i)
            if (dot(halfspaces[i].form, x) == halfspaces[i].c) t.push_back(static_cast<int>(i));
        return t;
    }

    std::vector<Vec> vertices() const {
        std::vector<Vec> out;
        if (space.empty) return out;
        int d = space.dimension();
        std::set<std::string> seen;
        auto push = [&](const Vec& x) {
            if (!contains(x)) return;
            if (seen.insert(vec_key(x)).second) out.push_back(x);
        };
        if (d == 0) {
            push(space.p0);
            return out;
        }
        int m = static_cast<int>(halfspaces.size());
        // Restricted forms in subspace coordinates.
        std::vector<Vec> rf(m);
        std::vector<Rational> rc(m);
        for (int i = 0; i < m; ++i) {
            Vec f(d);
            for (int j = 0; j < d; ++j) f[j] = dot(halfspaces[i].form, space.basis[j]);
            rf[i] = f;
            rc[i] = halfspaces[i].c - dot(halfspaces[i].form, space.p0);
        }
        std::vector<int> idx(d);
        std::function<void(int, int)> rec = [&](int start, int depth) {
            if (depth == d) {
                Mat A(d, d);
                Vec b(d);
                for (int r = 0; r < d; ++r) {
                    for (int j = 0; j < d; ++j) A(r, j) = rf[idx[r]][j];
                    b[r] = rc[idx[r]];
                }
                auto inv = inverse(A);
                if (!inv) return;
                push(space.at((*inv) * b));
                return;
            }
            for (int i = start; i < m; ++i) {
                idx[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Faces as sets of vertex indices, each face appearing once.
    std::vector<std::vector<int>> faces(const std::vector<Vec>& verts) const {
        std::set<std::vector<int>> tight_sets;
        std::vector<std::vector<int>> out;
        int k = static_cast<int>(verts.size());
        std::vector<std::vector<int>> vt(k);
        for (int i = 0; i < k; ++i) vt[i] = tight_set(verts[i]);
        for (unsigned mask = 1; mask < (1u << k); ++mask) {
            Vec c = zero_vec(verts[0].size());
            int cnt = 0;
            for (int i = 0; i < k; ++i)
                if (mask & (1u << i)) {
                    c = add(c, verts[i]);
                    ++cnt;
                }
            c = scale(Rational(1, cnt), c);
            auto t = tight_set(c);
            if (!tight_sets.insert(t).second) continue;
            std::vector<int> members;
            for (int i = 0; i < k; ++i)
                if (std::includes(vt[i].begin(), vt[i].end(), t.begin(), t.end())) members.push_back(i);
            out.push_back(members);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline Vec centroid(const std::vector<Vec>& pts) {
    Vec c = zero_vec(pts.at(0).size());
    for (const auto& p : pts) c = add(c, p);
    return scale(Rational(1, static_cast<long>(pts.size())), c);
}

}  // namespace levelzero
