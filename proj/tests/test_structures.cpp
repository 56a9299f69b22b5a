#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"

using namespace structbandit;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("structbandit_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string error_of(const std::string& text) {
    const fs::path p = scratch_dir("err") / "s.json";
    std::ofstream(p) << text;
    try {
        load(p.string());
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(FigureLeft, Shape) {
    const Structure s = build_figure_left();
    EXPECT_EQ(s.model_count(), 51u);
    EXPECT_EQ(s.arm_count(), 3u);
    const auto& truth = s.true_model();
    EXPECT_NEAR(truth.mean(0), 0.825, 1e-12);
    EXPECT_NEAR(truth.mean(1), 0.8, 1e-12);
    EXPECT_NEAR(truth.mean(2), 0.7, 1e-12);
    for (std::size_t m = 17; m < 34; ++m) {
        EXPECT_EQ(s.model(m).mean(1), 0.2);
        EXPECT_EQ(s.model(m).mean(2), 0.86);
        EXPECT_EQ(s.model(m).optimal_arm(), 2u);
    }
    EXPECT_GT(gamma_star(s), 0.0);
}

TEST(FigureLeft, NonInformativeVariant) {
    const Structure s = build_figure_left(17, false);
    for (const auto& m : s.models()) EXPECT_EQ(m.mean(1), 0.8);
    EXPECT_EQ(s.true_model(), build_figure_left().true_model());
    EXPECT_THROW(build_figure_left(1), std::invalid_argument);
}

TEST(FigureRight, Models) {
    const Structure s = build_figure_right();
    EXPECT_EQ(s.model_count(), 4u);
    EXPECT_EQ(s.model(2).means(), (std::vector<double>{0.8, 0.4, 0.6, 0.88}));
    EXPECT_EQ(s.model(2).optimal_arm(), 3u);
    EXPECT_EQ(s.model(3).optimal_arm(), 1u);
    EXPECT_EQ(build_figure_right(0.2).model(3).optimal_arm(), 0u);
}

TEST(Generator, DeterministicAndWellFormed) {
    GeneratorSpec spec;
    spec.seed = 42;
    const Structure a = generate_random(spec), b = generate_random(spec);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.model_count(), 150u);
    EXPECT_EQ(a.arm_count(), 50u);
    const auto& truth = a.true_model();
    EXPECT_LT(a.true_index(), 100u);
    for (std::size_t m = 100; m < 150; ++m) {
        const auto& h = a.model(m);
        EXPECT_NE(h.optimal_arm(), truth.optimal_arm());
        EXPECT_GT(h.optimal_value(), truth.optimal_value() - 1e-15);
        std::size_t differ = 0;
        for (std::size_t i = 0; i < 50; ++i)
            if (h.mean(i) != truth.mean(i)) ++differ;
        EXPECT_LE(differ, 2u);
    }
    spec.seed = 43;
    EXPECT_FALSE(generate_random(spec) == a);
    spec.arm_count = 2;
    EXPECT_THROW(generate_random(spec), std::invalid_argument);
}

TEST(Generator, TieNudge) {
    std::vector<double> mu{0.5, 0.5, 0.1};
    EXPECT_TRUE(nudge_ties(mu));
    EXPECT_NO_THROW(BanditModel{mu});
    std::vector<double> clean{0.6, 0.5};
    EXPECT_FALSE(nudge_ties(clean));
}

TEST(Io, RoundTrip) {
    const fs::path dir = scratch_dir("io");
    for (const Structure& s : {build_figure_left(), build_figure_right(), generate_random(GeneratorSpec{})}) {
        const auto path = (dir / "s.json").string();
        save(s, path);
        EXPECT_EQ(load(path), s);
    }
}

TEST(Io, GaussianRewardSurvives) {
    std::vector<BanditModel> ms{BanditModel({0.3, 0.6})};
    const Structure s(ms, 0, RewardSpec{RewardKind::Gaussian, 0.25});
    const auto back = structure_from_json(to_json(s));
    EXPECT_EQ(back.reward().kind, RewardKind::Gaussian);
    EXPECT_EQ(back.reward().variance, 0.25);
}

TEST(Io, Errors) {
    EXPECT_NE(error_of(R"({"arm_count": 2, "models": [[0.1, 0.2]]})").find("true_index"), std::string::npos);
    EXPECT_NE(error_of(R"({"arm_count": 2, "true_index": 0, "models": [[0.1, 1.2]]})").find("[0,1]"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"arm_count": 2, "true_index": 0, "models": [[0.1, 0.2, 0.3]]})").find("model 0"),
              std::string::npos);
    EXPECT_NE(error_of("{not json").find("malformed"), std::string::npos);
    EXPECT_THROW(load("/nonexistent/s.json"), std::runtime_error);
}
