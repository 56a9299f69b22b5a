#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "agent.hpp"

namespace structbandit {

/// Optimistic structured UCB: keep every model within r_i of the empirical means
/// and pull the arm with the highest mean over the surviving models.
class SucbAgent : public AgentBase {
public:
    SucbAgent(const Structure& structure, const AgentConfig& config)
        : AgentBase(structure.arm_count(), structure.reward()), models_(&structure.models()), config_(config),
          blocker_(structure.model_count(), 0), radius_(structure.arm_count(), 0.0),
          mean_(structure.arm_count(), 0.0) {
        config_.validate();
        order_.resize(models_->size());
        for (std::size_t m = 0; m < order_.size(); ++m) order_[m] = m;
        const auto& ms = *models_;
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            if (ms[a].optimal_value() != ms[b].optimal_value()) return ms[a].optimal_value() > ms[b].optimal_value();
            return ms[a].optimal_arm() < ms[b].optimal_arm();
        });
    }

    std::size_t select() override {
        if (pending_) throw AgentError("select called twice without observe");
        const std::uint64_t t = steps_ + 1;
        const double log_t = std::log(static_cast<double>(std::max<std::uint64_t>(t, 2)));
        const std::size_t k = counts_.size();
        for (std::size_t i = 0; i < k; ++i) {
            if (counts_[i] == 0) continue;
            const double n = static_cast<double>(counts_[i]);
            mean_[i] = sums_[i] / n;
            radius_[i] = std::sqrt(config_.alpha * config_.variance_multiplier * log_t / n);
        }
        // Models are visited by decreasing optimal value (then arm index), so the
        // first consistent one names the optimistic arm.
        for (std::size_t m : order_)
            if (consistent(m)) return issue((*models_)[m].optimal_arm());
        return issue(empirical_best());
    }

    void observe(std::size_t arm, double reward) override { accept(arm, reward); }

    AgentSnapshot snapshot() const override {
        AgentSnapshot s;
        fill_base(s);
        s.algorithm = Algorithm::SUCB;
        return s;
    }

private:
    /// Checks the arm that last excluded the model first; it usually still does.
    bool consistent(std::size_t m) {
        const auto& mu = (*models_)[m].means();
        const std::size_t k = counts_.size();
        const std::size_t first = blocker_[m];
        for (std::size_t step = 0; step < k; ++step) {
            const std::size_t i = (first + step) % k;
            if (counts_[i] == 0) continue;
            if (!(std::fabs(mean_[i] - mu[i]) < radius_[i])) {
                blocker_[m] = i;
                return false;
            }
        }
        return true;
    }

    const std::vector<BanditModel>* models_;
    AgentConfig config_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> blocker_;
    std::vector<double> radius_;
    std::vector<double> mean_;
};

/// Structure-blind UCB1 with index mean + sqrt(alpha * ln t / T_i).
class Ucb1Agent : public AgentBase {
public:
    Ucb1Agent(std::size_t arm_count, RewardSpec reward, const AgentConfig& config)
        : AgentBase(arm_count, reward), config_(config) {
        config_.validate();
    }

    std::size_t select() override {
        if (pending_) throw AgentError("select called twice without observe");
        for (std::size_t i = 0; i < counts_.size(); ++i)
            if (counts_[i] == 0) return issue(i);
        const double log_t = std::log(static_cast<double>(steps_ + 1));
        std::size_t best = 0;
        double best_index = -kInfinity;
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            const double index = empirical_mean(i) + std::sqrt(config_.alpha * log_t / static_cast<double>(counts_[i]));
            if (index > best_index) {
                best_index = index;
                best = i;
            }
        }
        return issue(best);
    }

    void observe(std::size_t arm, double reward) override { accept(arm, reward); }

    AgentSnapshot snapshot() const override {
        AgentSnapshot s;
        fill_base(s);
        s.algorithm = Algorithm::UCB1;
        return s;
    }

private:
    AgentConfig config_;
};

}  // namespace structbandit
