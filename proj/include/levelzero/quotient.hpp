#pragma once

#include "levelzero/apartment.hpp"
#include "levelzero/finclass.hpp"

namespace levelzero {

/// Simple roots of an irreducible type-A system in Dynkin-chain order.
inline std::vector<int> dynkin_chain(const RootSystem& rs) {
    int r = rs.rank;
    auto adjacent = [&](int a, int b) { return a != b && dot(rs.roots[rs.simple[a]], rs.roots[rs.simple[b]]) != 0; };
    int start = 0;
    for (int a = 0; a < r; ++a) {
        int deg = 0;
        for (int b = 0; b < r; ++b) deg += adjacent(a, b);
        if (deg <= 1) {
            start = a;
            break;
        }
    }
    std::vector<int> chain{start};
    std::vector<char> used(r, 0);
    used[start] = 1;
    while (static_cast<int>(chain.size()) < r) {
        int next = -1;
        for (int b = 0; b < r; ++b)
            if (!used[b] && adjacent(chain.back(), b)) next = b;
        if (next < 0) throw std::invalid_argument("dynkin_chain: not a chain");
        used[next] = 1;
        chain.push_back(next);
    }
    return chain;
}

inline void require_type_a(const Arrangement& A) {
    const auto& t = A.rs->cartan_type;
    if (!A.is_full || !(t == "A1" || t == "A2")) throw std::invalid_argument("reductive_quotient: apartment must be of type Ã1 or Ã2");
}

/// Vertices v_0 = 0, v_1, ..., v_{n-1} of the fundamental alcove, with α_{chain[j]}(v_k) = δ_{j+1,k}.
inline std::vector<Vec> fundamental_alcove_vertices(const Arrangement& A) {
    require_type_a(A);
    const RootSystem& rs = *A.rs;
    auto chain = dynkin_chain(rs);
    Mat S(rs.rank, rs.rank);
    for (int j = 0; j < rs.rank; ++j)
        for (int c = 0; c < rs.rank; ++c) S(j, c) = rs.forms[rs.simple[chain[j]]][c];
    std::vector<Vec> out{zero_vec(rs.rank)};
    for (int k = 0; k < rs.rank; ++k) {
        Vec b = zero_vec(rs.rank);
        b[k] = 1;
        out.push_back(*solve(S, b));
    }
    return out;
}

/// Indices of alcove vertices spanning F, or nullopt if F is not a face of the fundamental alcove.
inline std::optional<std::vector<int>> alcove_vertex_indices(const Arrangement& A, const Facet& F) {
    auto V = fundamental_alcove_vertices(A);
    std::vector<int> I;
    for (const auto& v : A.vertices(F)) {
        auto it = std::find(V.begin(), V.end(), v);
        if (it == V.end()) return std::nullopt;
        I.push_back(static_cast<int>(it - V.begin()));
    }
    std::sort(I.begin(), I.end());
    return I;
}

struct ReductiveQuotient {
    std::vector<int> composition;
    std::shared_ptr<GroupFamily> family;
    SpacePtr space;
};

/**
 * Finite reductive quotient of the parahoric of F as Π GL_{n_i}(F_q).
 * Faces of the fundamental alcove read blocks from cyclic vertex gaps;
 * other facets use the component sizes of Σ_F in decreasing order.
 */
inline ReductiveQuotient reductive_quotient(const Arrangement& A, const Facet& F, int q) {
    require_type_a(A);
    const RootSystem& rs = *A.rs;
    int n = rs.rank + 1;
    ReductiveQuotient out;
    if (auto I = alcove_vertex_indices(A, F)) {
        out.composition = reductive_quotient_composition(*I, n);
    } else {
        auto sig = A.sigma_F(F);
        auto pos = positive_system(rs, sig, generic_vector(rs), generic_vector(rs));
        int used = 0;
        for (const auto& comp : components_of(rs, simple_roots_of(rs, pos))) {
            out.composition.push_back(static_cast<int>(comp.size()) + 1);
            used += static_cast<int>(comp.size()) + 1;
        }
        for (; used < n; ++used) out.composition.push_back(1);
        std::sort(out.composition.rbegin(), out.composition.rend());
    }
    if (!is_prime(q)) throw std::invalid_argument("reductive_quotient: q must be prime");
    long order = 1;
    for (int b : out.composition) order *= gl_order(b, q);
    if (order > 20000) throw std::invalid_argument("reductive_quotient: group order exceeds 20000");
    out.family = std::make_shared<GroupFamily>(n, q);
    out.space = out.family->space(out.composition);
    return out;
}

/// Levi of the quotient of F cut out by F' with F ⊂ closure(F'), both faces of the fundamental alcove.
inline std::vector<int> quotient_levi(const Arrangement& A, const Facet& F, const Facet& Fp) {
    auto I = alcove_vertex_indices(A, F), J = alcove_vertex_indices(A, Fp);
    if (!I || !J) throw std::invalid_argument("quotient_levi: facets must be faces of the fundamental alcove");
    if (!A.closure_contains(Fp, F)) throw std::invalid_argument("quotient_levi: F is not in the closure of F'");
    return quotient_levi_composition(*I, *J, A.rs->rank + 1);
}

}  // namespace levelzero
