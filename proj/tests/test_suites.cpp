#include "levelzero/suites.hpp"

#include <gtest/gtest.h>

using namespace levelzero;

TEST(GroupNames, ParseAndReject) {
    auto g = parse_group("gl3q2");
    EXPECT_FALSE(g.torus);
    EXPECT_EQ(g.n, 3);
    EXPECT_EQ(g.q, 2);
    auto t = parse_group("torus3q5cycle");
    EXPECT_TRUE(t.torus);
    EXPECT_EQ(t.perm, (std::vector<int>{1, 2, 0}));
    EXPECT_EQ(parse_group("torus2q3swap").perm, (std::vector<int>{1, 0}));
    for (const char* bad : {"gl9q7", "gl2q4", "gl4q2", "gl3q5", "gl0q2", "sl2q2", "", "torus5q3cycle"}) EXPECT_THROW(parse_group(bad), UsageError) << bad;
}

TEST(GroupNames, DefaultSuiteCoversRequiredGroups) {
    auto groups = default_s2_groups();
    for (const char* g : {"gl2q2", "gl2q3", "gl2q5", "gl3q2", "torus3q3cycle", "torus3q5swap", "torus2q5swap"})
        EXPECT_NE(std::find(groups.begin(), groups.end(), g), groups.end()) << g;
}

TEST(Reports, RecordCarriesEveryField) {
    auto r = quantity_record({{"k", 1}}, Quantity::of(Rational(1, 2)), Quantity::of(Rational(1, 2)), 1e-3);
    auto j = r.to_json();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"config", "computed", "predicted", "exact", "tolerance", "samples", "seed", "pass"}));
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["computed"], "1/2");
    EXPECT_EQ(j["tolerance"].get<double>(), 0.0);
}

TEST(Reports, SuiteCountsFailures) {
    SuiteReport rep;
    rep.checks.push_back(bool_record({}, true));
    rep.checks.push_back(bool_record({}, false));
    EXPECT_EQ(rep.failures(), 1);
    EXPECT_FALSE(rep.pass());
    EXPECT_EQ(rep.to_json()["total"], 2);
}

TEST(Suites, FiniteGroupSuitesPass) {
    EXPECT_TRUE(run_s2({"gl2q2", "torus2q3swap"}, std::nullopt).pass());
    auto cusp = run_cusp({"gl2q2"}, std::nullopt);
    EXPECT_TRUE(cusp.pass());
    bool saw_trivial = false;
    for (const auto& c : cusp.checks)
        if (c.predicted == "(-1/2, 1/2, 1)") saw_trivial = c.pass;
    EXPECT_TRUE(saw_trivial);
    EXPECT_TRUE(run_ind({"gl2q3"}, std::nullopt).pass());
}

TEST(Suites, InvalidParametersAreUsageErrors) {
    MonteCarloConfig mc;
    EXPECT_THROW(run_prop16("A3", 5, 10, mc), UsageError);
    EXPECT_THROW(run_prop16("A2", 0, 10, mc), UsageError);
    EXPECT_THROW(run_euler("A1", 5, 10, "everywhere", 1, mc), UsageError);
    EXPECT_THROW(run_sign({"X5"}, 2), UsageError);
}

TEST(FacetListing, JsonShape) {
    auto A = Arrangement::full(build_root_system("A2"));
    auto F = A->facet_of_point({Rational(1, 2), 0});
    auto j = facet_json(*A, F);
    EXPECT_EQ(j["type"], "A2");
    EXPECT_EQ(j["dim"], 1);
    ASSERT_EQ(j["constraints"].size(), 3u);
    EXPECT_EQ(j["constraints"][0]["kind"], "open");
    EXPECT_EQ(j["constraints"][1]["kind"], "eq");
    EXPECT_EQ(j["constraints"][1]["root_index"], 1);
    EXPECT_EQ(j["barycenter"][0], "1/2");
}
