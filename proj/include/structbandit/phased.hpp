#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "agent.hpp"

namespace structbandit {

inline constexpr std::uint64_t kHorizonCeiling = std::uint64_t{1} << 62;

/// Per-arm pull target of phase h: ceil(alpha * log_n / 4^-h * (1 + 1/beta)^2), at least 1.
inline std::uint64_t phase_target(double alpha, double beta, double log_n, std::size_t phase) {
    const double threshold = std::ldexp(1.0, -static_cast<int>(phase));
    const double margin = (1.0 + 1.0 / beta) * (1.0 + 1.0 / beta);
    const double raw = std::ceil(alpha * log_n / (threshold * threshold) * margin);
    if (!(raw < static_cast<double>(kHorizonCeiling))) return kHorizonCeiling;
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(raw));
}

/// ceil(n^(1+eta)), exact when 1+eta is an integer, saturating near 2^62.
inline std::uint64_t next_period_horizon(std::uint64_t n, double eta) {
    const double exponent = 1.0 + eta;
    std::uint64_t next;
    if (exponent == std::floor(exponent) && exponent < 64.0) {
        next = 1;
        for (int e = 0; e < static_cast<int>(exponent); ++e) {
            if (next > kHorizonCeiling / n) return kHorizonCeiling;
            next *= n;
        }
    } else {
        const double v = std::ceil(std::pow(static_cast<double>(n), exponent));
        if (!(v < static_cast<double>(kHorizonCeiling))) return kHorizonCeiling;
        next = static_cast<std::uint64_t>(v);
    }
    next = std::max(next, n + 1);
    return std::min(next, kHorizonCeiling);
}

/// Structured arm elimination. With `anytime` set the horizon is unknown and the
/// run is split into periods of growing length ñ_k; the confidence set carries over
/// between periods while the removal threshold and phase targets restart.
class PhasedEliminationAgent : public AgentBase {
public:
    PhasedEliminationAgent(const Structure& structure, const AgentConfig& config, bool anytime)
        : AgentBase(structure.arm_count(), structure.reward()), models_(&structure.models()), config_(config),
          anytime_(anytime), period_counts_(structure.arm_count(), 0), period_start_counts_(structure.arm_count(), 0),
          last_phase_(structure.arm_count()), last_target_(structure.arm_count(), 0) {
        config_.validate();
        confidence_ = ModelSubset::range(models_->size());
        if (anytime_) {
            period_horizon_ = 2;
            start_period();
        } else {
            period_horizon_ = config_.horizon;
            log_n_ = std::log(static_cast<double>(config_.horizon));
            active_ = optimal_arms_of(*models_, confidence_);
            start_phase(0);
        }
    }

    std::size_t select() override {
        if (pending_) throw AgentError("select called twice without observe");
        if (fallback_) return issue(*fallback_);
        if (frozen_ || active_.size() == 1) return issue(active_.front());
        const auto& arms = active_.items();
        for (std::size_t step = 0; step < arms.size(); ++step) {
            const std::size_t pos = (cursor_ + step) % arms.size();
            if (period_counts_[arms[pos]] < target_) {
                cursor_ = pos + 1;
                return issue(arms[pos]);
            }
        }
        // Unreachable: a phase whose targets are all met is closed in observe().
        return issue(arms.front());
    }

    void observe(std::size_t arm, double reward) override {
        accept(arm, reward);
        ++period_counts_[arm];
        ++period_steps_;
        if (!fallback_ && !frozen_) {
            while (!fallback_ && !frozen_ && targets_met()) finish_phase();
        }
        if (anytime_ && period_steps_ >= period_horizon_) {
            period_horizon_ = next_period_horizon(period_horizon_, config_.eta);
            ++period_;
            start_period();
        }
    }

    AgentSnapshot snapshot() const override {
        AgentSnapshot s;
        fill_base(s);
        s.algorithm = anytime_ ? Algorithm::ASAE : Algorithm::SAE;
        s.active_models = confidence_;
        s.active_arms = active_;
        s.phase = phase_;
        s.removal_threshold = std::ldexp(1.0, -static_cast<int>(phase_));
        s.period = period_;
        s.period_horizon = period_horizon_;
        s.period_start_counts = period_start_counts_;
        s.last_active_phase = last_phase_;
        s.last_active_target = last_target_;
        s.frozen = frozen_;
        s.fallback = fallback_.has_value();
        s.phases = phases_;
        s.periods = periods_;
        return s;
    }

private:
    bool targets_met() const {
        for (std::size_t i : active_)
            if (period_counts_[i] < target_) return false;
        return true;
    }

    void start_phase(std::size_t h) {
        phase_ = h;
        cursor_ = 0;
        target_ = phase_target(config_.alpha, config_.beta, log_n_, h);
        for (std::size_t i : active_) {
            last_phase_[i] = h;
            last_target_[i] = target_;
        }
    }

    void finish_phase() {
        ModelSubset updated = confidence_set(*models_, counts_, sums_, config_.alpha, log_n_);
        ArmSet next = set_intersection(optimal_arms_of(*models_, updated), active_);
        if (config_.record_phases) {
            PhaseRecord r;
            r.period = period_;
            r.phase = phase_;
            r.target = target_;
            r.log_n = log_n_;
            r.active = active_;
            r.counts = counts_;
            r.means.resize(counts_.size());
            for (std::size_t i = 0; i < counts_.size(); ++i) r.means[i] = empirical_mean(i);
            r.confidence_set = updated;
            r.active_after = next.empty() ? active_ : next;
            phases_.push_back(std::move(r));
        }
        confidence_ = std::move(updated);
        if (next.empty()) {
            if (active_.size() == 1) {
                frozen_ = true;
            } else {
                fallback_ = empirical_best();
            }
            return;
        }
        active_ = std::move(next);
        start_phase(phase_ + 1);
    }

    void start_period() {
        log_n_ = std::log(static_cast<double>(period_horizon_));
        period_steps_ = 0;
        std::fill(period_counts_.begin(), period_counts_.end(), 0);
        period_start_counts_ = counts_;
        frozen_ = false;
        fallback_.reset();
        if (confidence_.empty()) confidence_ = confidence_set(*models_, counts_, sums_, config_.alpha, log_n_);
        if (confidence_.empty()) confidence_ = ModelSubset::range(models_->size());
        active_ = optimal_arms_of(*models_, confidence_);
        if (config_.record_phases) {
            PeriodRecord r;
            r.period = period_;
            r.horizon = period_horizon_;
            r.start_step = steps_;
            r.confidence_set = confidence_;
            r.active = active_;
            periods_.push_back(std::move(r));
        }
        start_phase(0);
    }

    const std::vector<BanditModel>* models_;
    AgentConfig config_;
    bool anytime_;

    ModelSubset confidence_;
    ArmSet active_;
    std::size_t phase_ = 0;
    std::uint64_t target_ = 1;
    std::size_t cursor_ = 0;
    double log_n_ = 0.0;

    std::size_t period_ = 0;
    std::uint64_t period_horizon_ = 0;
    std::uint64_t period_steps_ = 0;
    std::vector<std::uint64_t> period_counts_;
    std::vector<std::uint64_t> period_start_counts_;

    std::vector<std::optional<std::size_t>> last_phase_;
    std::vector<std::uint64_t> last_target_;

    bool frozen_ = false;
    std::optional<std::size_t> fallback_;

    std::vector<PhaseRecord> phases_;
    std::vector<PeriodRecord> periods_;
};

}  // namespace structbandit
