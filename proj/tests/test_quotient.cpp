#include "levelzero/quotient.hpp"

#include <gtest/gtest.h>

using namespace levelzero;

namespace {

Facet facet_at(const Arrangement& A, Vec y) { return A.facet_of_point(y); }

}  // namespace

TEST(ReductiveQuotient, AlcoveFacesOfA1) {
    auto A = Arrangement::full(build_root_system("A1"));
    EXPECT_EQ(reductive_quotient(*A, facet_at(*A, {0}), 2).composition, (std::vector<int>{2}));
    EXPECT_EQ(reductive_quotient(*A, facet_at(*A, {1}), 2).composition, (std::vector<int>{2}));
    auto q = reductive_quotient(*A, facet_at(*A, {Rational(1, 2)}), 3);
    EXPECT_EQ(q.composition, (std::vector<int>{1, 1}));
    EXPECT_EQ(q.space->order(), 4);
}

TEST(ReductiveQuotient, AlcoveFacesOfA2) {
    auto A = Arrangement::full(build_root_system("A2"));
    auto V = fundamental_alcove_vertices(*A);
    ASSERT_EQ(V.size(), 3u);
    auto alcove = facet_at(*A, centroid(V));
    EXPECT_EQ(reductive_quotient(*A, alcove, 2).composition, (std::vector<int>{1, 1, 1}));
    for (const auto& v : V) EXPECT_EQ(reductive_quotient(*A, facet_at(*A, v), 2).composition, (std::vector<int>{3}));
    // Edges: the gaps between the two vertices, read cyclically.
    auto e01 = facet_at(*A, centroid({V[0], V[1]}));
    auto e12 = facet_at(*A, centroid({V[1], V[2]}));
    auto e02 = facet_at(*A, centroid({V[0], V[2]}));
    EXPECT_EQ(reductive_quotient(*A, e01, 2).composition, (std::vector<int>{1, 2}));
    EXPECT_EQ(reductive_quotient(*A, e12, 2).composition, (std::vector<int>{1, 2}));
    EXPECT_EQ(reductive_quotient(*A, e02, 2).composition, (std::vector<int>{2, 1}));
    auto q = reductive_quotient(*A, e01, 3);
    EXPECT_EQ(q.space->order(), 2 * 48);
}

TEST(ReductiveQuotient, OtherFacetsUseRootComponents) {
    auto A = Arrangement::full(build_root_system("A2"));
    // Far from the fundamental alcove: a vertex and an edge on one wall.
    EXPECT_EQ(reductive_quotient(*A, facet_at(*A, {3, -1}), 2).composition, (std::vector<int>{3}));
    EXPECT_EQ(reductive_quotient(*A, facet_at(*A, {3, Rational(1, 2)}), 2).composition, (std::vector<int>{2, 1}));
    EXPECT_EQ(reductive_quotient(*A, facet_at(*A, {Rational(7, 3), Rational(1, 3)}), 2).composition, (std::vector<int>{1, 1, 1}));
}

TEST(ReductiveQuotient, LeviOfNestedFacets) {
    auto A = Arrangement::full(build_root_system("A2"));
    auto V = fundamental_alcove_vertices(*A);
    auto v0 = facet_at(*A, V[0]);
    auto alcove = facet_at(*A, centroid(V));
    auto e01 = facet_at(*A, centroid({V[0], V[1]}));
    EXPECT_EQ(quotient_levi(*A, v0, alcove), (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(quotient_levi(*A, v0, e01), (std::vector<int>{1, 2}));
    EXPECT_EQ(quotient_levi(*A, e01, alcove), (std::vector<int>{1, 1, 1}));
    EXPECT_THROW(quotient_levi(*A, alcove, v0), std::invalid_argument);
}

TEST(ReductiveQuotient, RejectsUnsupportedInput) {
    auto A3 = Arrangement::full(build_root_system("A3"));
    EXPECT_THROW(reductive_quotient(*A3, A3->facet_of_point(zero_vec(3)), 2), std::invalid_argument);
    auto B2 = Arrangement::full(build_root_system("B2"));
    EXPECT_THROW(reductive_quotient(*B2, B2->facet_of_point(zero_vec(2)), 2), std::invalid_argument);
    auto A2 = Arrangement::full(build_root_system("A2"));
    EXPECT_THROW(reductive_quotient(*A2, A2->facet_of_point(zero_vec(2)), 4), std::invalid_argument);
    EXPECT_THROW(reductive_quotient(*A2, A2->facet_of_point(zero_vec(2)), 5), std::invalid_argument);
}
