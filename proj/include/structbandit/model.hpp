#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "index_set.hpp"

namespace structbandit {

/// Absolute tolerance for equality of derived real quantities (ties, classifiers).
inline constexpr double kCompareTolerance = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool nearly_equal(double a, double b) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= kCompareTolerance;
}

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One point of the model class: a mean reward per arm.
class BanditModel {
public:
    BanditModel() = default;

    /// Throws ModelError unless every mean lies in [0,1] and the argmax is unique.
    explicit BanditModel(std::vector<double> means) : means_(std::move(means)) {
        if (means_.empty()) throw ModelError("model has no arms");
        for (std::size_t i = 0; i < means_.size(); ++i) {
            const double m = means_[i];
            if (!(m >= 0.0 && m <= 1.0))
                throw ModelError("arm " + std::to_string(i) + ": mean " + std::to_string(m) +
                                 " outside [0,1]");
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < means_.size(); ++i)
            if (means_[i] > means_[best]) best = i;
        for (std::size_t i = 0; i < means_.size(); ++i) {
            if (i != best && means_[best] - means_[i] <= kCompareTolerance)
                throw ModelError("tied optimal arms " + std::to_string(std::min(i, best)) + " and " +
                                 std::to_string(std::max(i, best)));
        }
        best_ = best;
    }

    std::size_t arm_count() const { return means_.size(); }
    double mean(std::size_t arm) const { return means_.at(arm); }
    const std::vector<double>& means() const { return means_; }
    std::size_t optimal_arm() const { return best_; }
    double optimal_value() const { return means_[best_]; }

    friend bool operator==(const BanditModel& a, const BanditModel& b) { return a.means_ == b.means_; }

private:
    std::vector<double> means_;
    std::size_t best_ = 0;
};

enum class RewardKind { Bernoulli, Gaussian };

struct RewardSpec {
    RewardKind kind = RewardKind::Bernoulli;
    double variance = 0.5;  // Gaussian only

    friend bool operator==(const RewardSpec& a, const RewardSpec& b) {
        if (a.kind != b.kind) return false;
        return a.kind == RewardKind::Bernoulli || a.variance == b.variance;
    }
};

inline std::string to_string(RewardKind k) { return k == RewardKind::Bernoulli ? "bernoulli" : "gaussian"; }

/// Where a structure came from. Not part of structural equality.
struct Provenance {
    std::string builder = "manual";
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> flags;
};

class StructureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A finite, ordered collection of models sharing an arm count. The true index is
/// environment-only knowledge: agents must never read it.
class Structure {
public:
    Structure(std::vector<BanditModel> models, std::size_t true_index, RewardSpec reward = {},
              Provenance provenance = {})
        : models_(std::move(models)), true_index_(true_index), reward_(reward),
          provenance_(std::move(provenance)) {
        if (models_.empty()) throw StructureError("structure has no models");
        arm_count_ = models_.front().arm_count();
        for (std::size_t m = 0; m < models_.size(); ++m) {
            if (models_[m].arm_count() != arm_count_)
                throw StructureError("model " + std::to_string(m) + " has " +
                                     std::to_string(models_[m].arm_count()) + " arms, expected " +
                                     std::to_string(arm_count_));
        }
        if (true_index_ >= models_.size())
            throw StructureError("true_index " + std::to_string(true_index_) + " out of range");
        if (reward_.kind == RewardKind::Gaussian && !(reward_.variance > 0.0))
            throw StructureError("gaussian reward variance must be positive");
    }

    std::size_t arm_count() const { return arm_count_; }
    std::size_t model_count() const { return models_.size(); }
    std::size_t true_index() const { return true_index_; }
    const BanditModel& model(std::size_t m) const { return models_.at(m); }
    const std::vector<BanditModel>& models() const { return models_; }
    const BanditModel& true_model() const { return models_[true_index_]; }
    const RewardSpec& reward() const { return reward_; }
    const Provenance& provenance() const { return provenance_; }

    ModelSubset all_models() const { return ModelSubset::range(models_.size()); }

    friend bool operator==(const Structure& a, const Structure& b) {
        return a.models_ == b.models_ && a.true_index_ == b.true_index_ && a.reward_ == b.reward_;
    }

private:
    std::vector<BanditModel> models_;
    std::size_t arm_count_ = 0;
    std::size_t true_index_ = 0;
    RewardSpec reward_;
    Provenance provenance_;
};

}  // namespace structbandit
