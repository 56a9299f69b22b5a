#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "index_set.hpp"
#include "model.hpp"

namespace structbandit {

inline std::size_t optimal_arm(const BanditModel& model) { return model.optimal_arm(); }

/// Delta_i(theta) = mu*(theta) - mu_i(theta).
inline double suboptimality_gap(const BanditModel& model, std::size_t arm) {
    if (arm >= model.arm_count())
        throw std::out_of_range("arm " + std::to_string(arm) + " out of range");
    return model.optimal_value() - model.mean(arm);
}

/// Gamma_i(a, b) = |mu_i(a) - mu_i(b)|.
inline double model_gap(const BanditModel& a, const BanditModel& b, std::size_t arm) {
    if (a.arm_count() != b.arm_count()) throw std::invalid_argument("arm count mismatch");
    if (arm >= a.arm_count()) throw std::out_of_range("arm " + std::to_string(arm) + " out of range");
    return std::fabs(a.mean(arm) - b.mean(arm));
}

/// Arms that are optimal for at least one member of `subset`.
inline ArmSet optimal_arm_set(const Structure& s, const ModelSubset& subset) {
    if (subset.empty()) throw std::invalid_argument("optimal_arm_set of an empty model subset");
    ArmSet arms;
    for (std::size_t m : subset) arms.insert(s.model(m).optimal_arm());
    return arms;
}

inline ArmSet optimal_arm_set(const Structure& s) { return optimal_arm_set(s, s.all_models()); }

/// Theta_i^*: models in which `arm` is optimal.
inline ModelSubset models_with_optimal_arm(const Structure& s, std::size_t arm) {
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < s.model_count(); ++m)
        if (s.model(m).optimal_arm() == arm) out.push_back(m);
    return ModelSubset(std::move(out));
}

/// Theta_i^+: models optimal at `arm` whose optimal value strictly exceeds mu*(theta*).
inline ModelSubset optimistic_models(const Structure& s, std::size_t arm) {
    const double target = s.true_model().optimal_value();
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < s.model_count(); ++m) {
        const auto& model = s.model(m);
        if (model.optimal_arm() == arm && model.optimal_value() > target) out.push_back(m);
    }
    return ModelSubset(std::move(out));
}

/// Models whose optimal arm differs from the true model's.
inline ModelSubset competing_models(const Structure& s) {
    const std::size_t best = s.true_model().optimal_arm();
    std::vector<std::size_t> out;
    for (std::size_t m = 0; m < s.model_count(); ++m)
        if (s.model(m).optimal_arm() != best) out.push_back(m);
    return ModelSubset(std::move(out));
}

struct PsiResult {
    double value = kInfinity;
    std::optional<std::size_t> argmin;  // hardest model; empty iff the subset is empty
};

/// Min over `subset` of the max over `arms` of the squared model gap against theta*.
/// Ties resolve to the lowest model index.
inline PsiResult psi(const Structure& s, const ModelSubset& subset, const ArmSet& arms) {
    if (arms.empty()) throw std::invalid_argument("psi over an empty arm set");
    if (arms.back() >= s.arm_count()) throw std::out_of_range("psi arm index out of range");
    const auto& truth = s.true_model().means();
    PsiResult best;
    for (std::size_t m : subset) {
        const auto& mu = s.model(m).means();
        double worst = 0.0;
        for (std::size_t j : arms) {
            const double d = mu[j] - truth[j];
            worst = std::max(worst, d * d);
        }
        if (worst < best.value) {
            best.value = worst;
            best.argmin = m;
        }
    }
    return best;
}

/// Gamma_*: smallest gap at the true optimal arm against any competing model (+inf if none).
inline double gamma_star(const Structure& s) {
    const std::size_t best = s.true_model().optimal_arm();
    double g = kInfinity;
    for (std::size_t m : competing_models(s)) g = std::min(g, model_gap(s.model(m), s.true_model(), best));
    return g;
}

/// Smallest sub-optimality of the true optimal arm inside any competing model (+inf if none).
inline double delta_floor(const Structure& s) {
    const std::size_t best = s.true_model().optimal_arm();
    double d = kInfinity;
    for (std::size_t m : competing_models(s)) d = std::min(d, suboptimality_gap(s.model(m), best));
    return d;
}

/// Optimistic models for `arm` that match theta* on every other arm (within tolerance).
inline ModelSubset indistinguishable_optimistic_models(const Structure& s, std::size_t arm) {
    const auto& truth = s.true_model();
    std::vector<std::size_t> out;
    for (std::size_t m : optimistic_models(s, arm)) {
        bool matches = true;
        for (std::size_t j = 0; j < s.arm_count() && matches; ++j)
            if (j != arm && model_gap(s.model(m), truth, j) > kCompareTolerance) matches = false;
        if (matches) out.push_back(m);
    }
    return ModelSubset(std::move(out));
}

inline bool is_worst_case_structure(const Structure& s) {
    const std::size_t best = s.true_model().optimal_arm();
    for (std::size_t i = 0; i < s.arm_count(); ++i) {
        if (i == best) continue;
        const ArmSet only{i};
        const double all = psi(s, optimistic_models(s, i), only).value;
        const double restricted = psi(s, indistinguishable_optimistic_models(s, i), only).value;
        if (!nearly_equal(all, restricted)) return false;
    }
    return true;
}

/// `a_star_per_arm[i]` is the arm set used to discard arm i (see theory.hpp).
inline bool is_optimistic_structure(const Structure& s, const std::vector<ArmSet>* a_star_per_arm) {
    if (a_star_per_arm == nullptr)
        throw std::invalid_argument("optimistic-structure test needs elimination sequences");
    const std::size_t best = s.true_model().optimal_arm();
    for (std::size_t i = 0; i < s.arm_count(); ++i) {
        if (i == best) continue;
        const ModelSubset owners = models_with_optimal_arm(s, i);
        if (owners.empty()) continue;  // both sides are the empty infimum
        if (i >= a_star_per_arm->size() || (*a_star_per_arm)[i].empty())
            throw std::invalid_argument("missing discarding arm set for arm " + std::to_string(i));
        const ArmSet& arms = (*a_star_per_arm)[i];
        if (!nearly_equal(psi(s, optimistic_models(s, i), arms).value, psi(s, owners, arms).value))
            return false;
    }
    return true;
}

inline bool is_constant_regret_structure(const Structure& s) {
    const auto& truth = s.true_model();
    const std::size_t best = truth.optimal_arm();
    const double g = gamma_star(s);
    for (std::size_t m : competing_models(s)) {
        const auto& model = s.model(m);
        if (!nearly_equal(model_gap(model, truth, best), g)) return false;
        for (std::size_t j = 0; j < s.arm_count(); ++j) {
            if (j == best || j == model.optimal_arm()) continue;
            if (model_gap(model, truth, j) > kCompareTolerance) return false;
        }
    }
    return true;
}

struct Classification {
    bool in_wc = false;
    std::optional<bool> in_opt;  // only evaluated when discarding sets are supplied
    bool in_cr = false;
};

inline Classification classify(const Structure& s, const std::vector<ArmSet>* a_star_per_arm = nullptr) {
    Classification c;
    c.in_wc = is_worst_case_structure(s);
    c.in_cr = is_constant_regret_structure(s);
    if (a_star_per_arm != nullptr) c.in_opt = is_optimistic_structure(s, a_star_per_arm);
    return c;
}

}  // namespace structbandit
