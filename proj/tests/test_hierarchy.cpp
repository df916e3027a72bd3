#include <gtest/gtest.h>

#include "common.hpp"
#include "latsum/hierarchy.hpp"

using namespace latsum;
using namespace testfx;

namespace {

std::vector<int> all_but(const Arrangement& a, std::vector<int> drop) {
    std::vector<int> keep;
    for (int i = 0; i < a.size(); ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) keep.push_back(i);
    return keep;
}

}  // namespace

TEST(Hierarchy, RankOneFamilyMinusEachFunctional) {
    auto a = a1_family(1);
    for (QVec y : {QVec{Q(0)}, QVec{Q(1, 3)}}) {
        ExactField fd{cyclotomic_order(a, y)};
        for (int g = 0; g < 3; ++g) {
            auto rep = check_hierarchy(fd, a, all_but(a, {g}), y, 5);
            EXPECT_TRUE(rep.ok()) << "g = " << g;
            EXPECT_EQ(rep.mismatched, 0);
            EXPECT_EQ(rep.max_discrepancy, 0);
            EXPECT_EQ(rep.disagreements, 0);
            EXPECT_GT(rep.vanished, 0);
        }
    }
}

TEST(Hierarchy, ThreeLinesMinusThird) {
    auto a = three_lines(Q(1, 2), Q(1, 3), Q(1, 5));
    QVec y{Q(1, 7), Q(1, 11)};
    ExactField fd{cyclotomic_order(a, y)};
    auto rep = check_hierarchy(fd, a, {0, 1}, y, 4);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.removed, std::vector<int>{2});
}

TEST(Hierarchy, EmptyProductIsIdentity) {
    auto a = a1_family(Q(1, 2));
    QVec y{Q(1, 3)};
    ExactField fd{cyclotomic_order(a, y)};
    auto rep = check_hierarchy(fd, a, {0, 1, 2}, y, 4);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.vanished, 0);
}

TEST(Hierarchy, TwoStepsCommute) {
    Arrangement a(2, {fn({1, 0}, 0, "f1"), fn({0, 1}, 0, "f2"), fn({1, 1}, Q(1, 3), "g"), fn({1, -1}, 0, "h")});
    QVec y{Q(1, 7), Q(2, 11)};
    ExactField fd{cyclotomic_order(a, y)};
    ZVec phi = choose_phi(a);
    auto s1 = hierarchy_lhs(fd, a, {2, 3}, y, phi, 4);
    auto s2 = hierarchy_lhs(fd, a, {3, 2}, y, phi, 4);
    EXPECT_EQ(s1.dump(), s2.dump());
    HierarchyOptions o;
    o.removal_order = {3, 2};
    EXPECT_TRUE(check_hierarchy(fd, a, {0, 1}, y, 4, o).ok());
    EXPECT_TRUE(check_hierarchy(fd, a, {1, 2}, y, 4).ok());
}

TEST(Hierarchy, SummandEigenIdentity) {
    auto a = a1_family(1);
    QVec y{Q(2, 5)};
    ExactField fd{cyclotomic_order(a, y)};
    auto ss = hierarchy_summands(fd, a, y, choose_phi(a), 8);
    int removed_var = 0;
    for (auto& s : ss)
        for (int g = 0; g < a.size(); ++g) {
            auto r = apply_Dg_summand(fd, a, s, g);
            EXPECT_TRUE(r.agree);
            const Basis& B = a.bases()[s.basis];
            EXPECT_EQ(r.vanished, B.contains(g));
            if (r.vanished) {
                EXPECT_TRUE(r.summand.numerator.empty());
                continue;
            }
            // the variable t_g is gone
            for (auto& [m, c] : r.summand.numerator.terms()) EXPECT_EQ(mono_exp(m, a.size(), g), 0);
            ++removed_var;
        }
    EXPECT_GT(removed_var, 0);
}

TEST(Hierarchy, DroppedBasisMemberGivesZero) {
    // B = {f0}: D_{f0} kills that summand
    auto a = a1_family(1);
    ExactField fd{4};
    auto ss = hierarchy_summands(fd, a, {Q(1, 3)}, choose_phi(a), 6);
    int f0 = a.index_of("f0");
    int hits = 0;
    for (auto& s : ss)
        if (a.bases()[s.basis].members == std::vector<int>{f0}) {
            auto r = apply_Dg_summand(fd, a, s, f0);
            EXPECT_TRUE(r.vanished);
            EXPECT_TRUE(r.summand.numerator.empty());
            ++hits;
        }
    EXPECT_EQ(hits, 1);
}

TEST(Hierarchy, NumericMode) {
    auto a = three_lines(Q(1, 2), Q(1, 3), Q(1, 5));
    NumericField nf{128};
    auto rep = check_hierarchy(nf, a, {0, 1}, {Q(1, 7), Q(1, 11)}, 4);
    EXPECT_TRUE(rep.ok());
    EXPECT_LT(rep.max_discrepancy, 1e-30);
}

TEST(Hierarchy, Errors) {
    auto a = three_lines(Q(1, 2), Q(1, 3), Q(1, 5));
    ExactField fd{4};
    // keeping only f1 drops the rank
    EXPECT_THROW(check_hierarchy(fd, a, {0}, {Q(1, 7), Q(1, 11)}, 3), RankDrop);
    HierarchyOptions o;
    o.removal_order = {1};
    EXPECT_THROW(check_hierarchy(fd, a, {0, 1}, {Q(1, 7), Q(1, 11)}, 3, o), InvalidInput);
    // y on a translate excluded for the sub-arrangement
    EXPECT_THROW(check_hierarchy(fd, a, {0, 1}, {Q(0), Q(1, 11)}, 3), ExcludedPoint);
}
