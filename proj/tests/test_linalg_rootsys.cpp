#include "levelzero/rootsys.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace levelzero;

TEST(Rational, ParsesAndRejects) {
    EXPECT_EQ(parse_rational("-2/4"), Rational(-1, 2));
    EXPECT_EQ(parse_rational("7"), Rational(7));
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_EQ(floor_of(Rational(-1, 3)), -1);
    EXPECT_EQ(floor_of(Rational(5, 2)), 2);
}

TEST(LinearAlgebra, SolveInverseDeterminant) {
    Mat m = Mat::from_rows({{2, 1}, {1, 1}}, 2);
    EXPECT_EQ(det(m), 1);
    auto inv = inverse(m);
    ASSERT_TRUE(inv);
    EXPECT_EQ(*inv * m, Mat::identity(2));
    auto x = solve(m, Vec{3, 2});
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, (Vec{1, 1}));
    Mat singular = Mat::from_rows({{1, 2}, {2, 4}}, 2);
    EXPECT_FALSE(inverse(singular));
    EXPECT_EQ(kernel(singular).size(), 1u);
}

TEST(LinearAlgebra, SpanOperations) {
    std::vector<Vec> u{{1, 0, 0}, {0, 1, 0}}, v{{0, 1, 0}, {0, 0, 1}};
    auto w = intersect_spans(u, v, 3);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_TRUE(in_span(w, Vec{0, 5, 0}, 3));
    EXPECT_TRUE(same_span(u, {{1, 1, 0}, {1, -1, 0}}, 3));
    EXPECT_EQ(common_kernel({{1, 1, 1}}, 3).size(), 2u);
}

TEST(LinearAlgebra, RandomInverseRoundTrip) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        Mat m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = oracle::random_rational(rng);
        auto inv = inverse(m);
        if (det(m) == 0) {
            EXPECT_FALSE(inv);
            continue;
        }
        ASSERT_TRUE(inv);
        EXPECT_EQ(m * *inv, Mat::identity(3));
        EXPECT_EQ(det(m) * det(*inv), 1);
    }
}

struct TypeCounts {
    const char* type;
    int rank, npos, weyl, automorphisms, parabolics, levis;
};

class RootSystemCounts : public ::testing::TestWithParam<TypeCounts> {};

TEST_P(RootSystemCounts, MatchClassification) {
    const auto& c = GetParam();
    auto rs = build_root_system(c.type);
    EXPECT_EQ(rs->rank, c.rank);
    EXPECT_EQ(rs->npos, c.npos);
    EXPECT_EQ(static_cast<int>(weyl_group(*rs).size()), c.weyl);
    EXPECT_EQ(static_cast<int>(root_automorphisms(*rs).size()), c.automorphisms);
    if (c.parabolics) {
        EXPECT_EQ(static_cast<int>(all_parabolics(*rs).size()), c.parabolics);
    }
    if (c.levis) {
        EXPECT_EQ(static_cast<int>(levi_lattice(*rs).size()), c.levis);
    }
    for (int i = 0; i < rs->size(); ++i) {
        EXPECT_EQ(rs->neg(rs->neg(i)), i);
        EXPECT_EQ(add(rs->forms[i], rs->forms[rs->neg(i)]), zero_vec(rs->rank));
    }
}

// Parabolics: A2 has G, 6 Borels, 6 maximal; B2 has G, 8 Borels, 8 maximal.
INSTANTIATE_TEST_SUITE_P(Types, RootSystemCounts,
                         ::testing::Values(TypeCounts{"A1", 1, 1, 2, 2, 3, 2}, TypeCounts{"A2", 2, 3, 6, 12, 13, 5}, TypeCounts{"B2", 2, 4, 8, 8, 17, 6},
                                           TypeCounts{"G2", 2, 6, 12, 12, 0, 0}, TypeCounts{"A1xA1", 2, 2, 4, 8, 9, 4}, TypeCounts{"A3", 3, 6, 24, 48, 0, 0}));

TEST(RootSystem, RejectsUnknownType) {
    EXPECT_THROW(build_root_system("Q7"), std::invalid_argument);
    EXPECT_THROW(build_root_system(""), std::invalid_argument);
}

TEST(RootSystem, AutomorphismLabels) {
    auto rs = build_root_system("A1xA1");
    int diagram = 0;
    for (const auto& w : root_automorphisms(*rs)) diagram += !w.word.empty() && w.word[0] == 'd';
    EXPECT_EQ(diagram, 4);
}

TEST(RootSystem, WeylElementsAreIsometriesPermutingRoots) {
    for (const char* t : {"A2", "B2", "G2", "A3"}) {
        auto rs = build_root_system(t);
        for (const auto& w : weyl_group(*rs)) {
            EXPECT_TRUE(is_isometry(*rs, w.y));
            std::vector<int> p = w.perm;
            std::sort(p.begin(), p.end());
            for (int i = 0; i < rs->size(); ++i) EXPECT_EQ(p[i], i);
        }
    }
}
