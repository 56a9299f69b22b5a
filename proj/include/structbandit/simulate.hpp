#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "agent.hpp"
#include "environment.hpp"
#include "phased.hpp"
#include "sucb.hpp"

namespace structbandit {

inline std::unique_ptr<Agent> make_agent(const Structure& structure, const AgentConfig& config) {
    switch (config.algorithm) {
        case Algorithm::SAE: return std::make_unique<PhasedEliminationAgent>(structure, config, false);
        case Algorithm::ASAE: return std::make_unique<PhasedEliminationAgent>(structure, config, true);
        case Algorithm::SUCB: return std::make_unique<SucbAgent>(structure, config);
        case Algorithm::UCB1: return std::make_unique<Ucb1Agent>(structure.arm_count(), structure.reward(), config);
    }
    throw std::invalid_argument("unknown algorithm");
}

struct RunResult {
    std::string label;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> checkpoints;
    std::vector<double> regret;  // cumulative pseudo-regret at each checkpoint
    std::vector<std::uint64_t> pull_counts;
    double elapsed_seconds = 0.0;
    AgentSnapshot final_state;
    std::vector<std::uint32_t> actions;  // filled only in audit mode
};

/// Runs `agent` for `horizon` steps against `env` and records pseudo-regret at the checkpoints.
inline RunResult simulate(Agent& agent, Environment& env, std::uint64_t horizon,
                          const std::vector<std::uint64_t>& checkpoints, bool audit = false) {
    if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    if (agent.arm_count() != env.arm_count()) throw std::invalid_argument("agent and environment arm counts differ");
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        if (checkpoints[c] == 0 || checkpoints[c] > horizon) throw std::invalid_argument("checkpoint outside [1, horizon]");
        if (c > 0 && checkpoints[c] <= checkpoints[c - 1]) throw std::invalid_argument("checkpoints must increase");
    }
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> gaps(env.arm_count());
    for (std::size_t i = 0; i < gaps.size(); ++i) gaps[i] = env.gap(i);

    RunResult result;
    result.checkpoints = checkpoints;
    result.regret.reserve(checkpoints.size());
    if (audit) result.actions.reserve(horizon);
    double regret = 0.0;
    std::size_t next = 0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const std::size_t arm = agent.select();
        if (arm >= gaps.size()) throw std::logic_error("agent selected an invalid arm");
        agent.observe(arm, env.pull(arm));
        regret += gaps[arm];
        if (audit) result.actions.push_back(static_cast<std::uint32_t>(arm));
        while (next < checkpoints.size() && checkpoints[next] == t) {
            result.regret.push_back(regret);
            ++next;
        }
    }
    result.final_state = agent.snapshot();
    result.pull_counts = result.final_state.pull_counts;
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace structbandit
