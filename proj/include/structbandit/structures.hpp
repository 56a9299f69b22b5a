#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace structbandit {

inline constexpr double kTieGap = 1e-9;
inline constexpr double kTieNudge = 1e-6;

/// Raises the leading mean by 1e-6 when the top two are within 1e-9. Returns true if it nudged.
inline bool nudge_ties(std::vector<double>& means) {
    if (means.size() < 2) return false;
    std::size_t first = 0;
    for (std::size_t i = 1; i < means.size(); ++i)
        if (means[i] > means[first]) first = i;
    double second = -kInfinity;
    for (std::size_t i = 0; i < means.size(); ++i)
        if (i != first) second = std::max(second, means[i]);
    if (means[first] - second >= kTieGap) return false;
    const double raised = std::min(means[first] + kTieNudge, 1.0);
    if (raised - second < kTieGap) throw StructureError("tied optimum cannot be separated inside [0,1]");
    means[first] = raised;
    return true;
}

/// Three regions of a one-parameter family sampled at interior grid points. The
/// true model is the grid point nearest the middle of the first region.
inline Structure build_figure_left(std::size_t grid_per_region = 17, bool informative_arm2 = true) {
    if (grid_per_region < 2) throw std::invalid_argument("grid_per_region must be >= 2");
    const auto lerp = [](double a, double b, double u) { return a + (b - a) * u; };
    std::vector<BanditModel> models;
    Provenance prov;
    prov.builder = "figure_left";
    prov.flags["grid_per_region"] = std::to_string(grid_per_region);
    prov.flags["informative_arm2"] = informative_arm2 ? "true" : "false";
    std::size_t nudged = 0;
    std::size_t true_index = 0;
    double nearest = kInfinity;
    for (std::size_t region = 0; region < 3; ++region) {
        for (std::size_t j = 0; j < grid_per_region; ++j) {
            const double u = static_cast<double>(j + 1) / static_cast<double>(grid_per_region + 1);
            std::vector<double> mu(3);
            switch (region) {
                case 0:
                    mu = {lerp(0.85, 0.8, u), 0.8, lerp(0.6, 0.8, u)};
                    break;
                case 1:
                    mu = {lerp(0.8, 0.4, u), informative_arm2 ? 0.2 : 0.8, 0.86};
                    break;
                default:
                    mu = {0.4, 0.8, lerp(0.8, 0.6, u)};
                    break;
            }
            if (nudge_ties(mu)) ++nudged;
            if (region == 0 && std::fabs(u - 0.5) < nearest) {
                nearest = std::fabs(u - 0.5);
                true_index = models.size();
            }
            models.emplace_back(std::move(mu));
        }
    }
    if (nudged > 0) prov.flags["nudged_models"] = std::to_string(nudged);
    return Structure(std::move(models), true_index, RewardSpec{}, prov);
}

/// Four region-constant models on four arms; the true model is the first.
/// `arm2_region4` is the mean of arm 1 (0-based) in the fourth model.
inline Structure build_figure_right(double arm2_region4 = 0.92) {
    Provenance prov;
    prov.builder = "figure_right";
    prov.flags["arm2_region4"] = std::to_string(arm2_region4);
    std::vector<BanditModel> models{
        BanditModel({0.8, 0.7, 0.6, 0.5}),
        BanditModel({0.8, 0.7, 0.84, 0.1}),
        BanditModel({0.8, 0.4, 0.6, 0.88}),
        BanditModel({0.8, arm2_region4, 0.6, 0.5}),
    };
    return Structure(std::move(models), 0, RewardSpec{}, prov);
}

struct GeneratorSpec {
    std::size_t base_model_count = 100;
    std::size_t arm_count = 50;
    std::size_t hard_model_count = 50;
    std::uint64_t seed = 0;
    double optimistic_scale = 0.2;
    double shrink_factor = 0.1;

    void validate() const {
        if (base_model_count == 0) throw std::invalid_argument("base_model_count must be positive");
        if (arm_count < 3) throw std::invalid_argument("arm_count must be >= 3");
        if (!(optimistic_scale > 0.0 && optimistic_scale <= 1.0))
            throw std::invalid_argument("optimistic_scale must lie in (0, 1]");
        if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw std::invalid_argument("shrink_factor must lie in (0, 1)");
    }
};

/// Uniform random models plus hard models: copies of the true model where one
/// sub-optimal arm becomes optimal and optimistic and another arm shrinks.
inline Structure generate_random(const GeneratorSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    Provenance prov;
    prov.builder = "random";
    prov.seed = spec.seed;
    std::vector<BanditModel> models;
    models.reserve(spec.base_model_count + spec.hard_model_count);
    std::size_t nudged = 0;
    for (std::size_t m = 0; m < spec.base_model_count; ++m) {
        std::vector<double> mu(spec.arm_count);
        for (double& v : mu) v = rng.uniform();
        if (nudge_ties(mu)) ++nudged;
        models.emplace_back(std::move(mu));
    }
    const auto true_index = static_cast<std::size_t>(rng.below(spec.base_model_count));
    const BanditModel truth = models[true_index];
    const std::size_t best = truth.optimal_arm();
    std::size_t clamped = 0;
    for (std::size_t h = 0; h < spec.hard_model_count; ++h) {
        std::vector<double> mu = truth.means();
        std::size_t raised = static_cast<std::size_t>(rng.below(spec.arm_count - 1));
        if (raised >= best) ++raised;
        double eps = rng.uniform();
        while (eps < 1e-6) eps = rng.uniform();
        double value = truth.optimal_value() + spec.optimistic_scale * eps;
        if (value > 1.0) {
            value = 1.0;
            ++clamped;
            prov.flags["clamped_model_" + std::to_string(models.size())] = "true";
        }
        mu[raised] = value;
        std::size_t shrunk = static_cast<std::size_t>(rng.below(spec.arm_count - 2));
        const std::size_t lo = std::min(raised, best), hi = std::max(raised, best);
        if (shrunk >= lo) ++shrunk;
        if (shrunk >= hi) ++shrunk;
        mu[shrunk] *= spec.shrink_factor;
        if (nudge_ties(mu)) ++nudged;
        models.emplace_back(std::move(mu));
    }
    if (nudged > 0) prov.flags["nudged_models"] = std::to_string(nudged);
    if (clamped > 0) prov.flags["clamped_models"] = std::to_string(clamped);
    return Structure(std::move(models), true_index, RewardSpec{}, prov);
}

}  // namespace structbandit
