#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace structbandit;
using testing_helpers::make_structure;

namespace {

/// Pulls one fixed arm forever.
class FixedArmAgent : public Agent {
public:
    FixedArmAgent(std::size_t arms, std::size_t arm) : arms_(arms), arm_(arm), counts_(arms, 0) {}
    std::size_t select() override { return arm_; }
    void observe(std::size_t arm, double) override { ++counts_[arm]; }
    AgentSnapshot snapshot() const override {
        AgentSnapshot s;
        s.pull_counts = counts_;
        return s;
    }
    std::size_t arm_count() const override { return arms_; }

private:
    std::size_t arms_, arm_;
    std::vector<std::uint64_t> counts_;
};

ExperimentConfig small_config(std::size_t runs = 6) {
    ExperimentConfig c;
    c.structure.builder = "figure_right";
    c.algorithms = standard_algorithms(0.1);
    c.horizon = 2000;
    c.runs = runs;
    c.checkpoint_count = 20;
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Rng, ReproducibleAndUniform) {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
    Rng r(1);
    double sum = 0.0;
    std::vector<int> bins(10, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        ++bins[r.below(10)];
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.01);
    for (int c : bins) EXPECT_NEAR(c, 10000, 500);
    EXPECT_NE(run_seed(0, "SAE", 0), run_seed(0, "SAE", 1));
    EXPECT_NE(run_seed(0, "SAE", 0), run_seed(0, "ASAE", 0));
}

TEST(Rng, NormalMoments) {
    Rng r(2);
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / 200000.0, 0.0, 0.01);
    EXPECT_NEAR(s2 / 200000.0, 1.0, 0.02);
}

TEST(Stats, StudentQuantileAgainstBoost) {
    for (double dof : {1.0, 2.0, 10.0, 24.0, 99.0, 1000.0})
        for (double p : {0.9, 0.975, 0.995})
            EXPECT_NEAR(student_t_quantile(p, dof), boost::math::quantile(boost::math::students_t(dof), p), 1e-9)
                << dof << " " << p;
    EXPECT_NEAR(student_t_quantile(0.975, 99.0), 1.9842, 1e-4);
    EXPECT_NEAR(student_t_quantile(0.975, 1.0), 12.706, 1e-3);
    EXPECT_NEAR(student_t_quantile(0.975, 10.0), 2.228, 1e-3);
}

TEST(Stats, Interval) {
    const auto same = t_interval({3.0, 3.0, 3.0});
    EXPECT_EQ(same.mean, 3.0);
    EXPECT_EQ(same.half_width, 0.0);
    const auto two = t_interval({1.0, 3.0});
    EXPECT_EQ(two.mean, 2.0);
    EXPECT_NEAR(two.half_width, 12.706 * std::sqrt(2.0) / std::sqrt(2.0), 1e-3);
    EXPECT_THROW(t_interval({1.0}), std::invalid_argument);
    const std::vector<double> tiny(7, 0.1);
    EXPECT_EQ(t_interval(tiny).mean, 0.1);
}

TEST(Simulate, FixedArmRegret) {
    const Structure s = make_structure({{0.8, 0.6}});
    FixedArmAgent good(2, 0), bad(2, 1);
    Environment e1(s, 1), e2(s, 1);
    EXPECT_EQ(simulate(good, e1, 100, {100}).regret.back(), 0.0);
    EXPECT_NEAR(simulate(bad, e2, 100, {50, 100}).regret.back(), 20.0, 1e-9);
}

TEST(Simulate, Validation) {
    const Structure s = make_structure({{0.8, 0.6}});
    FixedArmAgent wrong(3, 0);
    Environment env(s, 1);
    EXPECT_THROW(simulate(wrong, env, 10, {10}), std::invalid_argument);
    FixedArmAgent ok(2, 0);
    EXPECT_THROW(simulate(ok, env, 10, {5, 5}), std::invalid_argument);
    EXPECT_THROW(simulate(ok, env, 10, {11}), std::invalid_argument);
    EXPECT_THROW(simulate(ok, env, 0, {}), std::invalid_argument);
}

TEST(Simulate, GaussianRewards) {
    const Structure s({BanditModel({0.3, 0.6})}, 0, RewardSpec{RewardKind::Gaussian, 0.5});
    Environment env(s, 3);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) sum += env.pull(1);
    EXPECT_NEAR(sum / 20000.0, 0.6, 0.02);
}

TEST(Checkpoints, Default) {
    const auto cps = default_checkpoints(10000);
    EXPECT_EQ(cps.back(), 10000u);
    EXPECT_TRUE(std::is_sorted(cps.begin(), cps.end()));
    EXPECT_EQ(std::adjacent_find(cps.begin(), cps.end()), cps.end());
    EXPECT_LE(cps.size(), 200u);
    EXPECT_GE(cps.size(), 150u);
    EXPECT_EQ(default_checkpoints(5).back(), 5u);
}

TEST(Batch, WorkerCountDoesNotChangeResults) {
    const auto c = small_config();
    const auto one = run_batch(c, 1), four = run_batch(c, 4);
    for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
        EXPECT_EQ(regret_csv(one.aggregates[a]), regret_csv(four.aggregates[a]));
        EXPECT_EQ(pulls_csv(one.aggregates[a]), pulls_csv(four.aggregates[a]));
    }
}

TEST(Batch, AlgorithmOrderDoesNotChangeResults) {
    auto c = small_config();
    const auto forward = run_batch(c);
    std::reverse(c.algorithms.begin(), c.algorithms.end());
    const auto backward = run_batch(c);
    for (const auto& a : forward.aggregates)
        EXPECT_EQ(regret_csv(a), regret_csv(find_aggregate(backward, a.label)));
}

TEST(Batch, RunInvariants) {
    auto c = small_config(3);
    c.audit = true;
    const auto b = run_batch(c, 2);
    const Structure s = build_figure_right();
    for (const auto& runs : b.runs)
        for (const auto& r : runs) {
            std::uint64_t total = 0;
            for (auto n : r.pull_counts) total += n;
            EXPECT_EQ(total, c.horizon);
            EXPECT_TRUE(std::is_sorted(r.regret.begin(), r.regret.end()));
            // Recompute regret from the action log at every checkpoint.
            double regret = 0.0;
            std::size_t next = 0;
            for (std::size_t t = 0; t < r.actions.size(); ++t) {
                regret += s.true_model().optimal_value() - s.true_model().mean(r.actions[t]);
                if (next < r.checkpoints.size() && r.checkpoints[next] == t + 1) EXPECT_NEAR(r.regret[next++], regret, 1e-9);
            }
            EXPECT_EQ(next, r.checkpoints.size());
        }
}

TEST(Batch, OptimalOnlyStructureHasZeroRegret) {
    ExperimentConfig c = small_config(2);
    const auto dir = std::filesystem::temp_directory_path() / "structbandit_test_single.json";
    save(make_structure({{0.2, 0.9, 0.5}, {0.4, 0.8, 0.1}}), dir.string());
    c.structure.builder = "file";
    c.structure.path = dir.string();
    c.algorithms = {algorithm_entry(Algorithm::SAE, 2, 1, 0.1), algorithm_entry(Algorithm::SUCB, 2, 1, 0.1)};
    const auto b = run_batch(c);
    for (const auto& a : b.aggregates) {
        EXPECT_EQ(a.regret.back().mean, 0.0);
        EXPECT_EQ(a.regret.back().half_width, 0.0);
    }
}

TEST(Batch, FailureNamesAlgorithmAndSeed) {
    ExperimentConfig c = small_config(2);
    c.structure.builder = "file";
    c.structure.path = "/nonexistent/structure.json";
    c.structure.per_run = true;
    try {
        run_batch(c);
        FAIL() << "expected failure";
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("algorithm 'UCB'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("seed " + std::to_string(run_seed(0, "UCB", 0))), std::string::npos) << msg;
    }
}

TEST(Batch, OutputsAndManifest) {
    const auto c = small_config(2);
    const auto b = run_batch(c);
    const auto dir = std::filesystem::temp_directory_path() / "structbandit_test_out";
    std::filesystem::remove_all(dir);
    write_batch_outputs(dir.string(), c, b);
    const std::string regret = slurp(dir / "regret_SAE.csv");
    EXPECT_EQ(regret.rfind("checkpoint,mean_regret,ci_half_width\n", 0), 0u);
    EXPECT_EQ(std::count(regret.begin(), regret.end(), '\n'), 21);
    EXPECT_EQ(slurp(dir / "pulls_UCB.csv").rfind("arm,mean_pulls,ci_half_width\n0,", 0), 0u);
    const auto manifest = read_json_file((dir / "manifest.json").string());
    EXPECT_EQ(manifest.at("library_version"), kLibraryVersion);
    EXPECT_EQ(manifest.at("seeds").at("SAE").at(1).get<std::uint64_t>(), run_seed(0, "SAE", 1));
    EXPECT_EQ(manifest.dump().find("elapsed"), std::string::npos);
}

TEST(Config, JsonRoundTripAndErrors) {
    const auto c = figure_experiment("fig3d", false);
    const auto back = experiment_from_json(to_json(c));
    EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
    EXPECT_THROW(experiment_from_json(Json::parse(R"({"algorithms": [], "horizon": 10})")), FormatError);
    EXPECT_THROW(experiment_from_json(Json::parse(R"({"structure": {"builder": "nope"}, "algorithms": [{"name": "SAE"}], "horizon": 10})")),
                 FormatError);
    EXPECT_THROW(experiment_from_json(Json::parse(R"({"structure": {"builder": "figure_left"}, "algorithms": [{"name": "XYZ"}], "horizon": 10})")),
                 FormatError);
}
