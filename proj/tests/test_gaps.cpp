#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"

using namespace structbandit;
using testing_helpers::make_structure;
using testing_helpers::matrix_of;
using testing_helpers::plain;

TEST(Model, RejectsTiedOptimalArms) {
    EXPECT_THROW(BanditModel({0.5, 0.5, 0.1}), ModelError);
    EXPECT_THROW(BanditModel({0.5, 1.2}), ModelError);
    EXPECT_THROW(BanditModel(std::vector<double>{}), ModelError);
    EXPECT_NO_THROW(BanditModel({0.0, 1.0}));
}

TEST(Model, StructureValidation) {
    EXPECT_THROW(make_structure({{0.1, 0.2}, {0.1, 0.2, 0.3}}), StructureError);
    EXPECT_THROW(make_structure({{0.1, 0.2}}, 3), StructureError);
}

TEST(Gaps, OptimalArmAndGap) {
    const BanditModel m({0.8, 0.6});
    EXPECT_EQ(optimal_arm(m), 0u);
    EXPECT_NEAR(suboptimality_gap(m, 1), 0.2, 1e-15);
    EXPECT_EQ(suboptimality_gap(m, 0), 0.0);
    const BanditModel other({0.8, 0.2, 0.86});
    EXPECT_EQ(optimal_arm(other), 2u);
    EXPECT_NEAR(suboptimality_gap(other, 1), 0.66, 1e-15);
}

TEST(Gaps, ModelGap) {
    const BanditModel a({0.8, 0.2, 0.86}), b({0.8, 0.58, 0.7});
    EXPECT_NEAR(model_gap(a, b, 1), 0.38, 1e-15);
    EXPECT_EQ(model_gap(a, b, 0), 0.0);
    EXPECT_EQ(model_gap(a, a, 2), 0.0);
    EXPECT_EQ(model_gap(a, b, 2), model_gap(b, a, 2));
}

TEST(Gaps, FigureRightSets) {
    const Structure s = build_figure_right();
    EXPECT_EQ(plain(optimal_arm_set(s)), (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(plain(models_with_optimal_arm(s, 2)), (std::vector<std::size_t>{1}));
    EXPECT_EQ(plain(optimistic_models(s, 3)), (std::vector<std::size_t>{2}));
    EXPECT_EQ(plain(competing_models(s)), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(plain(optimal_arm_set(s, ModelSubset{0})), (std::vector<std::size_t>{0}));
}

TEST(Gaps, PsiExamples) {
    const Structure s = build_figure_right();
    const auto owners = models_with_optimal_arm(s, 2);
    const auto all = psi(s, owners, ArmSet::range(4));
    EXPECT_NEAR(all.value, 0.16, 1e-12);  // arm 3 differs by 0.4
    ASSERT_TRUE(all.argmin.has_value());
    EXPECT_EQ(*all.argmin, 1u);
    EXPECT_NEAR(psi(s, owners, ArmSet{2}).value, 0.0576, 1e-12);

    const auto with_truth = psi(s, s.all_models(), ArmSet{1, 2});
    EXPECT_EQ(with_truth.value, 0.0);
    EXPECT_EQ(*with_truth.argmin, s.true_index());

    const auto empty = psi(s, ModelSubset{}, ArmSet{1});
    EXPECT_TRUE(std::isinf(empty.value));
    EXPECT_FALSE(empty.argmin.has_value());
    EXPECT_THROW(psi(s, owners, ArmSet{}), std::invalid_argument);
}

TEST(Gaps, PsiTiesResolveToLowestIndex) {
    const Structure s = make_structure({{0.8, 0.5}, {0.4, 0.9}, {0.4, 0.9}});
    EXPECT_EQ(*psi(s, ModelSubset{1, 2}, ArmSet{1}).argmin, 1u);
}

TEST(Gaps, GammaStarAndDeltaFloor) {
    const Structure right = build_figure_right();
    EXPECT_EQ(gamma_star(right), 0.0);
    EXPECT_NEAR(delta_floor(right), 0.04, 1e-12);

    const Structure single = make_structure({{0.9, 0.1}, {0.8, 0.3}});
    EXPECT_TRUE(std::isinf(gamma_star(single)));
    EXPECT_TRUE(std::isinf(delta_floor(single)));

    const Structure two = make_structure({{0.6, 0.5}, {0.55, 0.7}});
    EXPECT_NEAR(gamma_star(two), 0.05, 1e-12);
    EXPECT_NEAR(delta_floor(two), 0.15, 1e-12);

    const Structure left = build_figure_left();
    EXPECT_GT(gamma_star(left), 0.0);
}

TEST(Classify, NotWorstCaseWhenRestrictedSetIsEmpty) {
    // The only optimistic model differs from the truth on arm 0 as well.
    const Structure s = make_structure({{0.6, 0.5}, {0.3, 0.9}});
    EXPECT_FALSE(is_worst_case_structure(s));
}

TEST(Classify, GridStructureIsWorstCase) {
    std::vector<std::vector<double>> means;
    for (double a : {0.2, 0.5, 0.8})
        for (double b : {0.3, 0.6, 0.9}) means.push_back({a, b});
    const Structure s = make_structure(means, 6);  // (0.8, 0.3)
    const auto mu = matrix_of(s);
    EXPECT_TRUE(oracle::in_wc(mu, 6));
    EXPECT_TRUE(is_worst_case_structure(s));
}

TEST(Classify, ConstantRegretConstruction) {
    const Structure s = make_structure({{0.5, 0.3, 0.2}, {0.4999, 0.9, 0.2}, {0.4999, 0.3, 0.95}});
    EXPECT_TRUE(is_constant_regret_structure(s));
    const Structure broken = make_structure({{0.5, 0.3, 0.2}, {0.4999, 0.9, 0.25}, {0.4999, 0.3, 0.95}});
    EXPECT_FALSE(is_constant_regret_structure(broken));
    const Structure uneven = make_structure({{0.5, 0.3, 0.2}, {0.4999, 0.9, 0.2}, {0.4, 0.3, 0.95}});
    EXPECT_FALSE(is_constant_regret_structure(uneven));
}

TEST(Classify, OptimisticNeedsDiscardingSets) {
    const Structure s = build_figure_right();
    EXPECT_THROW(is_optimistic_structure(s, nullptr), std::invalid_argument);
    EXPECT_FALSE(classify(s).in_opt.has_value());
}

TEST(GapProperties, AgreeWithBruteForce) {
    const auto structures = testing_helpers::random_structures(25, 11);
    for (const auto& s : structures) {
        const auto mu = matrix_of(s);
        const std::size_t t = s.true_index();
        EXPECT_EQ(gamma_star(s), oracle::gamma_star(mu, t));
        EXPECT_EQ(delta_floor(s), oracle::delta_floor(mu, t));
        for (std::size_t i = 0; i < s.arm_count(); ++i) {
            EXPECT_EQ(plain(models_with_optimal_arm(s, i)), oracle::owners(mu, i));
            EXPECT_EQ(plain(optimistic_models(s, i)), oracle::optimistic(mu, t, i));
            std::size_t arg = 0;
            const double expect = oracle::psi(mu, t, oracle::owners(mu, i), {i, s.true_model().optimal_arm()}, &arg);
            const auto got = psi(s, models_with_optimal_arm(s, i), ArmSet{i, s.true_model().optimal_arm()});
            EXPECT_EQ(got.value, expect);
            if (got.argmin) EXPECT_EQ(*got.argmin, arg);
        }
        EXPECT_EQ(is_worst_case_structure(s), oracle::in_wc(mu, t));
        EXPECT_EQ(is_constant_regret_structure(s), oracle::in_cr(mu, t));
    }
}

TEST(GapProperties, SymmetryAndMonotonicity) {
    const auto structures = testing_helpers::random_structures(10, 12);
    Rng rng(5);
    for (const auto& s : structures) {
        const std::size_t k = s.arm_count(), m = s.model_count();
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t a = rng.below(m), b = rng.below(m), j = rng.below(k);
            EXPECT_EQ(model_gap(s.model(a), s.model(b), j), model_gap(s.model(b), s.model(a), j));
            // Random nested subsets of arms and models.
            std::vector<std::size_t> arms_small{rng.below(k)}, arms_big = arms_small;
            arms_big.push_back(rng.below(k));
            std::vector<std::size_t> models_big, models_small;
            for (std::size_t x = 0; x < m; ++x)
                if (rng.bernoulli(0.5)) {
                    models_big.push_back(x);
                    if (rng.bernoulli(0.5)) models_small.push_back(x);
                }
            const ModelSubset big(models_big), small(models_small);
            EXPECT_LE(psi(s, big, ArmSet(arms_small)).value, psi(s, big, ArmSet(arms_big)).value);
            EXPECT_GE(psi(s, small, ArmSet(arms_big)).value, psi(s, big, ArmSet(arms_big)).value);
        }
    }
}

TEST(GapProperties, OptimisticModelsAreOwners) {
    for (const auto& s : testing_helpers::random_structures(10, 13))
        for (std::size_t i = 0; i < s.arm_count(); ++i)
            EXPECT_TRUE(optimistic_models(s, i).is_subset_of(models_with_optimal_arm(s, i)));
}
