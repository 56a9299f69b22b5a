#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "index_set.hpp"
#include "model.hpp"

namespace structbandit {

enum class Algorithm { SAE, ASAE, SUCB, UCB1 };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::SAE: return "SAE";
        case Algorithm::ASAE: return "ASAE";
        case Algorithm::SUCB: return "SUCB";
        case Algorithm::UCB1: return "UCB";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "SAE") return Algorithm::SAE;
    if (name == "ASAE") return Algorithm::ASAE;
    if (name == "SUCB") return Algorithm::SUCB;
    if (name == "UCB" || name == "UCB1") return Algorithm::UCB1;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

struct AgentConfig {
    Algorithm algorithm = Algorithm::SAE;
    double alpha = 2.0;
    double beta = 1.0;
    double eta = 1.0;             // ASAE only
    std::uint64_t horizon = 0;    // SAE schedule; ignored by ASAE
    double variance_multiplier = 1.0;  // SUCB radius scale for Gaussian rewards
    bool record_phases = false;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
        if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
        if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
        if (!(variance_multiplier > 0.0)) throw std::invalid_argument("variance multiplier must be > 0");
        if (algorithm == Algorithm::SAE && horizon == 0) throw std::invalid_argument("SAE needs a horizon >= 1");
    }
};

class AgentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One completed elimination phase.
struct PhaseRecord {
    std::size_t period = 0;
    std::size_t phase = 0;
    std::uint64_t target = 0;
    double log_n = 0.0;
    ArmSet active;                              // arms active during the phase
    std::vector<std::uint64_t> counts;          // total pulls at phase end
    std::vector<double> means;                  // empirical means at phase end (0 if unpulled)
    ModelSubset confidence_set;                 // after the update
    ArmSet active_after;
};

struct PeriodRecord {
    std::size_t period = 0;
    std::uint64_t horizon = 0;
    std::uint64_t start_step = 0;
    ModelSubset confidence_set;  // at period start
    ArmSet active;               // at period start
};

struct AgentSnapshot {
    Algorithm algorithm = Algorithm::SAE;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> pull_counts;
    std::vector<double> reward_sums;
    ModelSubset active_models;
    ArmSet active_arms;
    std::size_t phase = 0;
    double removal_threshold = 1.0;
    std::size_t period = 0;
    std::uint64_t period_horizon = 0;
    std::vector<std::uint64_t> period_start_counts;
    std::vector<std::optional<std::size_t>> last_active_phase;  // per arm, within the latest period it was active
    std::vector<std::uint64_t> last_active_target;
    bool frozen = false;
    bool fallback = false;
    std::vector<PhaseRecord> phases;
    std::vector<PeriodRecord> periods;
};

/// Step-wise bandit policy. select() and observe() must alternate.
class Agent {
public:
    virtual ~Agent() = default;
    virtual std::size_t select() = 0;
    virtual void observe(std::size_t arm, double reward) = 0;
    virtual AgentSnapshot snapshot() const = 0;
    virtual std::size_t arm_count() const = 0;
};

/// Shared pull bookkeeping and call-order checks.
class AgentBase : public Agent {
public:
    AgentBase(std::size_t arm_count, RewardSpec reward)
        : reward_(reward), counts_(arm_count, 0), sums_(arm_count, 0.0) {}

    std::size_t arm_count() const override { return counts_.size(); }

protected:
    std::size_t issue(std::size_t arm) {
        pending_ = arm;
        return arm;
    }

    void accept(std::size_t arm, double reward) {
        if (!pending_) throw AgentError("observe called without a preceding select");
        if (arm != *pending_)
            throw AgentError("observed arm " + std::to_string(arm) + " but selected " + std::to_string(*pending_));
        if (reward_.kind == RewardKind::Bernoulli) {
            if (reward != 0.0 && reward != 1.0)
                throw AgentError("bernoulli reward must be 0 or 1, got " + std::to_string(reward));
        } else if (!std::isfinite(reward)) {
            throw AgentError("non-finite reward");
        }
        pending_.reset();
        ++counts_[arm];
        sums_[arm] += reward;
        ++steps_;
    }

    double empirical_mean(std::size_t arm) const {
        return counts_[arm] == 0 ? 0.0 : sums_[arm] / static_cast<double>(counts_[arm]);
    }

    /// Highest empirical mean among pulled arms, lowest index on ties; arm 0 if nothing was pulled.
    std::size_t empirical_best() const {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < counts_.size(); ++i) {
            if (counts_[i] == 0) continue;
            if (!best || empirical_mean(i) > empirical_mean(*best)) best = i;
        }
        return best.value_or(0);
    }

    void fill_base(AgentSnapshot& s) const {
        s.steps = steps_;
        s.pull_counts = counts_;
        s.reward_sums = sums_;
    }

    RewardSpec reward_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> sums_;
    std::uint64_t steps_ = 0;
    std::optional<std::size_t> pending_;
};

/// Models consistent with every pulled arm: |mean_i - mu_i(theta)| < sqrt(alpha * log_n / T_i).
inline ModelSubset confidence_set(const std::vector<BanditModel>& models, const std::vector<std::uint64_t>& counts,
                                  const std::vector<double>& sums, double alpha, double log_n) {
    const std::size_t k = counts.size();
    std::vector<double> mean(k, 0.0), radius(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i] == 0) continue;
        const double t = static_cast<double>(counts[i]);
        mean[i] = sums[i] / t;
        radius[i] = std::sqrt(alpha * log_n / t);
    }
    std::vector<std::size_t> kept;
    for (std::size_t m = 0; m < models.size(); ++m) {
        const auto& mu = models[m].means();
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i)
            if (counts[i] > 0 && !(std::fabs(mean[i] - mu[i]) < radius[i])) ok = false;
        if (ok) kept.push_back(m);
    }
    return ModelSubset(std::move(kept));
}

inline ArmSet optimal_arms_of(const std::vector<BanditModel>& models, const ModelSubset& subset) {
    ArmSet arms;
    for (std::size_t m : subset) arms.insert(models[m].optimal_arm());
    return arms;
}

}  // namespace structbandit
