#include "levelzero/finclass.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace levelzero;

namespace {

struct Group {
    int n, q;
};

std::string name_of(const ::testing::TestParamInfo<Group>& info) { return "GL" + std::to_string(info.param.n) + "F" + std::to_string(info.param.q); }

Rational inner(const ClassFunction& a, const ClassFunction& b) {
    Rational s = 0;
    for (int c = 0; c < a.space->nclasses(); ++c) s += a.values[c] * b.values[c] * static_cast<long>(a.space->classes[c].size());
    return s / a.space->order();
}

}  // namespace

class FiniteGroups : public ::testing::TestWithParam<Group> {};

TEST_P(FiniteGroups, ConjugacyClassesMatchBruteForce) {
    auto [n, q] = GetParam();
    oracle::BruteGL B(n, q);
    auto fam = build_gl(n, q);
    auto G = fam->space({n});
    ASSERT_EQ(G->order(), B.order());
    ASSERT_EQ(G->nclasses(), B.nclasses);
    // Same partition: the class maps agree up to relabeling.
    std::map<int, int> relabel;
    for (int i = 0; i < B.order(); ++i) {
        int lib = G->class_of[G->idx(B.code(B.elements[i]))];
        auto [it, fresh] = relabel.emplace(B.class_of[i], lib);
        EXPECT_EQ(it->second, lib);
    }
}

TEST_P(FiniteGroups, CuspidalProjectionMatchesBruteForce) {
    auto [n, q] = GetParam();
    oracle::BruteGL B(n, q);
    oracle::BruteHarishChandra HC{B};
    auto fam = build_gl(n, q);
    auto G = fam->space({n});
    for (int c = 0; c < G->nclasses(); ++c) {
        auto f = class_delta(G, c);
        auto expected = HC.proj_cusp(oracle::on_elements(B, f), {n});
        auto got = proj_cusp(*fam, f);
        for (const auto& g : B.elements) ASSERT_EQ(got.at_code(B.code(g)), expected.at(g)) << "class " << c;
    }
}

TEST_P(FiniteGroups, IdentitiesOnClassDeltas) {
    auto [n, q] = GetParam();
    auto fam = build_gl(n, q);
    auto G = fam->space({n});
    auto z = uniform_weights(*G);
    for (int c = 0; c < G->nclasses(); ++c) {
        auto rep = verify_decomposition(*fam, class_delta(G, c), z);
        EXPECT_TRUE(rep.ok()) << "class " << c;
    }
}

TEST_P(FiniteGroups, IdentityFiveMatchesInductionSum) {
    // Σ over coset representatives equals |P|^{-1} Σ over the group, i.e. a sum of inductions.
    auto [n, q] = GetParam();
    oracle::BruteGL B(n, q);
    oracle::BruteHarishChandra HC{B};
    auto fam = build_gl(n, q);
    auto G = fam->space({n});
    auto z = uniform_weights(*G);
    std::mt19937_64 rng(n * 100 + q);
    auto f = oracle::random_class_function(rng, G);
    auto fe = oracle::on_elements(B, f);
    oracle::ElementFunction sum;
    for (const auto& g : B.elements) sum[g] = 0;
    for (const auto& mu : oracle::compositions(n)) {
        auto h = mu == std::vector<int>{n} ? HC.proj_cusp(fe, mu) : HC.proj_cusp(HC.res(fe, {n}, mu), mu);
        auto term = mu == std::vector<int>{n} ? h : HC.ind(h, {n}, mu);
        for (auto& [g, v] : sum) v += z.at(mu) * term.at(g);
    }
    auto lib = identity5_rhs(*fam, f, z);
    for (const auto& g : B.elements) {
        EXPECT_EQ(lib.at_code(B.code(g)), sum.at(g));
        EXPECT_EQ(sum.at(g), fe.at(g));
    }
}

INSTANTIATE_TEST_SUITE_P(Small, FiniteGroups, ::testing::Values(Group{2, 2}, Group{2, 3}, Group{2, 5}, Group{3, 2}), name_of);

TEST(FiniteGroups, TrivialCharacterOfGL2F2) {
    auto fam = build_gl(2, 2);
    auto G = fam->space({2});
    // Classes ordered by element order: 1, 2, 3.
    auto p = proj_cusp(*fam, constant_function(G, 1));
    EXPECT_EQ(p.values, (std::vector<Rational>{Rational(-1, 2), Rational(1, 2), Rational(1)}));
    auto T = fam->space({1, 1});
    auto ind = ind_parabolic(*fam, constant_function(T, 1), G, {{1, 1}, false});
    EXPECT_EQ(ind.values, (std::vector<Rational>{3, 1, 0}));
    // The sign character is cuspidal, hence fixed.
    ClassFunction sgn{G, {1, -1, 1}};
    EXPECT_TRUE(is_cuspidal(*fam, sgn));
    EXPECT_EQ(proj_cusp(*fam, sgn), sgn);
}

TEST(FiniteGroups, TrivialProjectionFromFixedLines) {
    // Inducing the trivial character of the torus gives the permutation character on lines.
    for (int q : {2, 3, 5}) {
        oracle::BruteGL B(2, q);
        auto fam = build_gl(2, q);
        auto G = fam->space({2});
        auto p = proj_cusp(*fam, constant_function(G, 1));
        for (const auto& g : B.elements) EXPECT_EQ(p.at_code(B.code(g)), 1 - make_rational(B.fixed_lines(g), 2)) << "q=" << q;
    }
}

TEST(FiniteGroups, NormalizerCounts) {
    auto f2 = build_gl(2, 2);
    EXPECT_EQ(n_norm(*f2, f2->space({2}), {1, 1}), 2);
    auto f3 = build_gl(3, 2);
    auto G = f3->space({3});
    EXPECT_EQ(n_norm(*f3, G, {1, 1, 1}), 6);
    EXPECT_EQ(n_norm(*f3, G, {2, 1}), 1);
    EXPECT_EQ(n_norm(*f3, G, {3}), 1);
}

TEST(FiniteGroups, PropertiesOnRandomClassFunctions) {
    std::mt19937_64 rng(2024);
    for (auto [n, q] : {std::pair{2, 3}, std::pair{3, 2}}) {
        auto fam = build_gl(n, q);
        auto G = fam->space({n});
        for (int t = 0; t < 10; ++t) {
            auto f = oracle::random_class_function(rng, G);
            auto p = proj_cusp(*fam, f);
            EXPECT_TRUE(is_cuspidal(*fam, p));
            EXPECT_EQ(proj_cusp(*fam, p), p);
            EXPECT_EQ(identity1_rhs(*fam, f), f);
            for (const auto& mu : standard_compositions(*G)) {
                if (mu == G->lambda) continue;
                auto M = fam->space(mu);
                auto h = oracle::random_class_function(rng, M);
                // Frobenius reciprocity for parabolic induction and restriction.
                auto ind = ind_parabolic(*fam, h, G, {mu, false});
                EXPECT_EQ(inner(ind, f), inner(h, res_parabolic(*fam, f, {mu, false})));
                // Induction does not depend on the choice of parabolic.
                EXPECT_EQ(ind, ind_parabolic(*fam, h, G, {mu, true}));
            }
        }
    }
}

TEST(FiniteGroups, SkewedWeightsOnGL3) {
    auto fam = build_gl(3, 2);
    auto G = fam->space({3});
    auto z = uniform_weights(*G);
    z[{2, 1}] = Rational(1, 3);
    z[{1, 2}] = Rational(2, 3);
    EXPECT_EQ(check_weights(*G, z), "");
    for (int c = 0; c < G->nclasses(); ++c) EXPECT_TRUE(verify_decomposition(*fam, class_delta(G, c), z).identity5);
    z[{1, 2}] = Rational(1);
    EXPECT_NE(check_weights(*G, z), "");
    EXPECT_THROW(identity5_rhs(*fam, class_delta(G, 0), z), std::invalid_argument);
}

TEST(FiniteGroups, TwistedToriAreTheirOwnCuspidalPart) {
    for (auto perm : {std::vector<int>{1, 0}, std::vector<int>{1, 2, 0}, std::vector<int>{1, 0, 2}}) {
        for (int q : {3, 5}) {
            auto fam = build_twisted_torus(static_cast<int>(perm.size()), q, perm);
            auto T = fam->space(std::vector<int>(perm.size(), 1));
            ASSERT_TRUE(T->twisted());
            EXPECT_EQ(levi_representatives(*T).size(), 1u);
            for (int c = 0; c < T->nclasses(); ++c) {
                auto f = class_delta(T, c);
                EXPECT_EQ(proj_cusp(*fam, f), f);
                EXPECT_TRUE(verify_decomposition(*fam, f, uniform_weights(*T)).ok());
            }
        }
    }
}

TEST(FiniteGroups, RejectsInvalidInput) {
    EXPECT_THROW(build_gl(2, 4), std::invalid_argument);
    EXPECT_THROW(build_gl(4, 2), std::invalid_argument);
    EXPECT_THROW(build_gl(3, 5), std::invalid_argument);
    auto fam = build_gl(2, 2);
    auto G = fam->space({2});
    std::vector<Rational> per(G->order());
    for (int i = 0; i < G->order(); ++i) per[i] = i;
    EXPECT_FALSE(class_function_from_elements(G, per));
    EXPECT_TRUE(class_function_from_elements(G, std::vector<Rational>(G->order(), Rational(2))));
    EXPECT_THROW(res_parabolic(*fam, constant_function(G, 1), {{3}, false}), std::invalid_argument);
}

TEST(ClassCache, RoundTripAndRecovery) {
    auto dir = std::filesystem::temp_directory_path() / "levelzero-cache-test";
    std::filesystem::remove_all(dir);
    auto first = build_gl(2, 3, dir);
    auto file = cache_file(dir, 2, 3);
    ASSERT_TRUE(std::filesystem::exists(file));
    auto cached = load_cached_classes(file, 2, 3);
    ASSERT_TRUE(cached);
    auto again = build_gl(2, 3, dir);
    EXPECT_EQ(again->space({2})->class_of, first->space({2})->class_of);
    // A corrupt entry is ignored and rewritten.
    std::ofstream(file) << "{\"format_version\": 1, \"n\": 2";
    EXPECT_FALSE(load_cached_classes(file, 2, 3));
    auto rebuilt = build_gl(2, 3, dir);
    EXPECT_EQ(rebuilt->space({2})->class_of, first->space({2})->class_of);
    EXPECT_TRUE(load_cached_classes(file, 2, 3));
    std::filesystem::remove_all(dir);
}
