#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "model.hpp"
#include "rng.hpp"

namespace structbandit {

/// Draws rewards from the true model of a structure. This is the only place
/// that reads the true index during a simulation.
class Environment {
public:
    Environment(const Structure& structure, std::uint64_t seed)
        : structure_(&structure), reward_(structure.reward()), rng_(seed) {}

    std::size_t arm_count() const { return structure_->arm_count(); }

    double pull(std::size_t arm) {
        const double mu = structure_->true_model().mean(arm);
        if (reward_.kind == RewardKind::Bernoulli) return rng_.bernoulli(mu) ? 1.0 : 0.0;
        return mu + std::sqrt(reward_.variance) * rng_.normal();
    }

    /// Pseudo-regret contribution of pulling `arm`.
    double gap(std::size_t arm) const {
        const auto& m = structure_->true_model();
        return m.optimal_value() - m.mean(arm);
    }

    const RewardSpec& reward() const { return reward_; }

private:
    const Structure* structure_;
    RewardSpec reward_;
    Rng rng_;
};

}  // namespace structbandit
