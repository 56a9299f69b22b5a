#pragma once

#include <cstdint>
#include <cstdio>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "experiment.hpp"

namespace structbandit {

/// Upper end of `a` lies strictly below the lower end of `b`.
inline bool separated_below(const Interval& a, const Interval& b) {
    return a.mean + a.half_width < b.mean - b.half_width;
}

inline AlgorithmEntry algorithm_entry(Algorithm a, double alpha, double beta, double eta) {
    AlgorithmEntry e;
    e.label = to_string(a);
    e.config.algorithm = a;
    e.config.alpha = alpha;
    e.config.beta = beta;
    e.config.eta = eta;
    return e;
}

inline std::vector<AlgorithmEntry> standard_algorithms(double eta, double alpha = 2.0, double beta = 1.0) {
    return {algorithm_entry(Algorithm::UCB1, alpha, beta, eta), algorithm_entry(Algorithm::SUCB, alpha, beta, eta),
            algorithm_entry(Algorithm::SAE, alpha, beta, eta), algorithm_entry(Algorithm::ASAE, alpha, beta, eta)};
}

/// The four regret studies. `name` is one of fig3a, fig3b, fig3c, fig3d.
inline ExperimentConfig figure_experiment(const std::string& name, bool full_scale, std::uint64_t base_seed = 0) {
    ExperimentConfig c;
    c.base_seed = base_seed;
    c.runs = 100;
    c.horizon = 10000;
    if (name == "fig3a" || name == "fig3b") {
        c.structure.builder = "figure_left";
        c.structure.informative_arm2 = name == "fig3a";
        c.algorithms = standard_algorithms(0.1);
    } else if (name == "fig3c") {
        c.structure.builder = "figure_right";
        c.horizon = 500000;
        c.runs = full_scale ? 100 : 25;
        c.algorithms = standard_algorithms(0.01);
    } else if (name == "fig3d") {
        c.structure.builder = "random";
        c.structure.per_run = true;
        c.algorithms = standard_algorithms(0.1);
    } else {
        throw std::invalid_argument("unknown experiment '" + name + "'");
    }
    return c;
}

inline const AggregateResult& find_aggregate(const BatchResult& b, const std::string& label) {
    for (const auto& a : b.aggregates)
        if (a.label == label) return a;
    throw std::out_of_range("no results for '" + label + "'");
}

struct OrderingCheck {
    std::string description;
    bool passed = false;
};

/// `lower` must end below `higher` at the final checkpoint with disjoint intervals.
inline OrderingCheck check_ordering(const BatchResult& b, const std::string& lower, const std::string& higher) {
    const auto& lo = find_aggregate(b, lower).regret.back();
    const auto& hi = find_aggregate(b, higher).regret.back();
    OrderingCheck c;
    char buf[256];
    std::snprintf(buf, sizeof buf, "regret(%s)=%.2f+-%.2f < regret(%s)=%.2f+-%.2f", lower.c_str(), lo.mean,
                  lo.half_width, higher.c_str(), hi.mean, hi.half_width);
    c.description = buf;
    c.passed = separated_below(lo, hi);
    return c;
}

/// Orderings each regret study is expected to show.
inline std::vector<std::pair<std::string, std::string>> expected_orderings(const std::string& name) {
    if (name == "fig3a") return {{"ASAE", "SUCB"}, {"SAE", "SUCB"}, {"SUCB", "UCB"}};
    if (name == "fig3b") return {{"SUCB", "SAE"}, {"SAE", "UCB"}};
    if (name == "fig3c") return {{"ASAE", "SUCB"}, {"SAE", "SUCB"}};
    if (name == "fig3d") return {{"ASAE", "SUCB"}};
    throw std::invalid_argument("unknown experiment '" + name + "'");
}

}  // namespace structbandit
