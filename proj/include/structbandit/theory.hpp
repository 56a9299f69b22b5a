#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaps.hpp"
#include "model.hpp"

namespace structbandit {

inline constexpr double kEuler = 2.718281828459045235;

/// k_beta = sqrt((beta+1)^2 + 1/ln n) / (beta-1); empty for beta = 1.
inline std::optional<double> k_beta(double beta, double n) {
    if (!(beta >= 1.0)) throw std::invalid_argument("beta must be >= 1");
    if (!(n >= 2.0)) throw std::invalid_argument("k_beta needs n >= 2");
    if (beta == 1.0) return std::nullopt;
    return std::sqrt((beta + 1.0) * (beta + 1.0) + 1.0 / std::log(n)) / (beta - 1.0);
}

/// Deterministic proxies of the active sets of SAE for a known true model.
struct TheorySequences {
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t n = 0;
    double k_beta = 0.0;
    std::size_t optimal_arm = 0;
    std::size_t cap = 0;
    std::vector<ArmSet> active;      // A_h
    std::vector<ArmSet> eliminated;  // bar A_h
    std::vector<ArmSet> guaranteed;  // underline A_h
    std::vector<std::optional<std::size_t>> last_phase;  // h-bar per arm; empty outside A*(Theta)
    std::vector<bool> unresolved;
    std::vector<ArmSet> a_star_per_arm;  // empty for i* and arms outside A*(Theta)
    bool alpha_mismatch = false;         // alpha != beta^2
};

namespace detail {

/// inf over `subset` of max over `arms` of Gamma_j / 2^shift[j].
inline double inf_max_scaled_gap(const Structure& s, const ModelSubset& subset, const ArmSet& arms,
                                 const std::vector<int>& shift) {
    const auto& truth = s.true_model().means();
    double best = kInfinity;
    for (std::size_t m : subset) {
        const auto& mu = s.model(m).means();
        double worst = 0.0;
        for (std::size_t j : arms) worst = std::max(worst, std::ldexp(std::fabs(mu[j] - truth[j]), -shift[j]));
        best = std::min(best, worst);
    }
    return best;
}

}  // namespace detail

inline TheorySequences deterministic_sequences(const Structure& s, double alpha, double beta, std::uint64_t n) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    const auto kb = k_beta(beta, static_cast<double>(n));
    if (!kb) throw std::invalid_argument("deterministic sequences need beta > 1");

    TheorySequences seq;
    seq.alpha = alpha;
    seq.beta = beta;
    seq.n = n;
    seq.k_beta = *kb;
    seq.alpha_mismatch = !nearly_equal(alpha, beta * beta);
    seq.optimal_arm = s.true_model().optimal_arm();
    seq.cap = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n))));
    const std::size_t k = s.arm_count();
    seq.last_phase.assign(k, std::nullopt);
    seq.unresolved.assign(k, false);
    seq.a_star_per_arm.assign(k, ArmSet{});

    const ArmSet a_star = optimal_arm_set(s);
    std::vector<ModelSubset> owners(k);
    for (std::size_t i : a_star) owners[i] = models_with_optimal_arm(s, i);

    const std::vector<int> no_shift(k, 0);
    ArmSet current = a_star;
    for (std::size_t h = 0;; ++h) {
        seq.active.push_back(current);
        ArmSet guaranteed;
        if (h == 0) {
            guaranteed = a_star;
        } else {
            // Eliminated arms contribute Gamma_j / 2^(h - hbar_j - 1); active ones are unscaled.
            std::vector<int> shift(k, 0);
            for (std::size_t j : a_star)
                if (seq.last_phase[j] && *seq.last_phase[j] < h)
                    shift[j] = static_cast<int>(std::max<std::ptrdiff_t>(
                        static_cast<std::ptrdiff_t>(h) - static_cast<std::ptrdiff_t>(*seq.last_phase[j]) - 1, 0));
            const double previous = std::ldexp(1.0, -static_cast<int>(h - 1));
            for (std::size_t i : current)
                if (previous > seq.k_beta * detail::inf_max_scaled_gap(s, owners[i], a_star, shift)) guaranteed.insert(i);
        }
        seq.guaranteed.push_back(guaranteed);

        const double threshold = std::ldexp(1.0, -static_cast<int>(h));
        ArmSet removed;
        for (std::size_t i : current) {
            ArmSet arms = guaranteed;
            arms.insert(i);
            if (threshold <= detail::inf_max_scaled_gap(s, owners[i], arms, no_shift)) removed.insert(i);
        }
        seq.eliminated.push_back(removed);
        for (std::size_t i : removed) seq.last_phase[i] = h;

        ArmSet next = set_difference(current, removed);
        const bool done = next.is_subset_of(ArmSet{seq.optimal_arm});
        if (done || h >= seq.cap) {
            for (std::size_t i : next) {
                seq.last_phase[i] = h;
                if (i != seq.optimal_arm) seq.unresolved[i] = true;
            }
            seq.active.push_back(next);
            break;
        }
        current = std::move(next);
    }

    for (std::size_t i : a_star) {
        if (i == seq.optimal_arm) continue;
        ArmSet arms = seq.guaranteed[*seq.last_phase[i]];
        arms.insert(i);
        seq.a_star_per_arm[i] = arms;
    }
    return seq;
}

inline Classification classify(const Structure& s, const TheorySequences& seq) {
    return classify(s, &seq.a_star_per_arm);
}

struct BoundTerm {
    std::size_t arm = 0;
    double gap = 0.0;  // Delta_i(theta*)
    double psi = 0.0;
    double value = 0.0;
    std::string note;
};

struct BoundReport {
    std::string name;
    double value = 0.0;
    double constant = 0.0;
    std::vector<BoundTerm> terms;
    std::map<std::string, bool> flags;
    std::map<std::string, double> extras;
    std::vector<std::string> notes;

    /// Sum of the per-arm terms plus the constant.
    double recompute() const {
        double v = constant;
        for (const auto& t : terms) v += t.value;
        return v;
    }
};

/// |A*| n^(-2 alpha / beta^2) (log2 n + 2)^2.
inline double confidence_failure_bound(double n, double alpha, double beta, std::size_t a_star_count) {
    if (!(n >= 2.0)) throw std::invalid_argument("confidence_failure_bound needs n >= 2");
    const double l = std::log2(n) + 2.0;
    return static_cast<double>(a_star_count) * std::pow(n, -2.0 * alpha / (beta * beta)) * l * l;
}

inline BoundReport sae_bound(const Structure& s, const TheorySequences& seq, std::uint64_t n) {
    if (n < 64) throw std::invalid_argument("the SAE bound needs n >= 64");
    BoundReport r;
    r.name = "sae";
    const double c_beta = 4.0 * (1.0 + seq.beta * seq.beta);
    const double log_n = std::log(static_cast<double>(n));
    const ArmSet a_star = optimal_arm_set(s);
    const std::size_t best = s.true_model().optimal_arm();
    r.flags["alpha_equals_beta_squared"] = !seq.alpha_mismatch;
    r.flags["vacuous"] = false;
    r.flags["unresolved_sequences"] = false;
    if (seq.alpha_mismatch) r.notes.push_back("alpha != beta^2: the guarantee is stated for alpha = beta^2");
    r.extras["c_beta"] = c_beta;
    r.extras["k_beta"] = seq.k_beta;
    for (std::size_t i : a_star) {
        if (i == best) continue;
        BoundTerm t;
        t.arm = i;
        t.gap = suboptimality_gap(s.true_model(), i);
        t.psi = psi(s, models_with_optimal_arm(s, i), seq.a_star_per_arm.at(i)).value;
        if (t.psi == 0.0) {
            t.value = kInfinity;
            t.note = "psi is zero";
            r.flags["vacuous"] = true;
        } else {
            t.value = c_beta * t.gap * log_n / t.psi;
        }
        if (seq.unresolved[i]) {
            r.flags["unresolved_sequences"] = true;
            t.note += t.note.empty() ? "unresolved at phase cap" : "; unresolved at phase cap";
        }
        r.terms.push_back(t);
    }
    r.constant = 2.0 * static_cast<double>(a_star.size());
    r.value = r.recompute();
    return r;
}

namespace detail {

inline BoundReport pair_bound(const Structure& s, const std::string& name, double coeff, double log_term,
                              double constant_per_arm) {
    BoundReport r;
    r.name = name;
    const ArmSet a_star = optimal_arm_set(s);
    const std::size_t best = s.true_model().optimal_arm();
    r.flags["vacuous"] = false;
    for (std::size_t i : a_star) {
        if (i == best) continue;
        BoundTerm t;
        t.arm = i;
        t.gap = suboptimality_gap(s.true_model(), i);
        t.psi = psi(s, models_with_optimal_arm(s, i), ArmSet{i, best}).value;
        if (t.psi == 0.0) {
            t.value = kInfinity;
            t.note = "psi is zero";
            r.flags["vacuous"] = true;
        } else {
            t.value = coeff * t.gap * log_term / t.psi;
        }
        r.terms.push_back(t);
    }
    r.constant = constant_per_arm * static_cast<double>(a_star.size());
    r.value = r.recompute();
    return r;
}

}  // namespace detail

inline BoundReport asae_bound(const Structure& s, std::uint64_t n) {
    if (n < 2) throw std::invalid_argument("the ASAE bound needs n >= 2");
    return detail::pair_bound(s, "asae", 192.0, std::log(static_cast<double>(n)), 6.0);
}

class AssumptionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline BoundReport asae_constant_bound(const Structure& s) {
    const double g = gamma_star(s);
    if (!(g > 0.0)) throw AssumptionError("informative optimal arm assumption violated (Gamma* = 0)");
    const double count = static_cast<double>(optimal_arm_set(s).size());
    const double t_bar = std::isinf(g) ? 2.0 * count : 20.0 * count * std::log(2.0) / (g * g) + 2.0 * count;
    BoundReport r = detail::pair_bound(s, "const", 480.0, std::log(t_bar), 9.0);
    r.extras["t_bar"] = t_bar;
    r.extras["gamma_star"] = g;
    return r;
}

inline BoundReport sucb_bound(const Structure& s, std::uint64_t n, double c, double c_prime) {
    if (!(c > 0.0) || !(c_prime > 0.0)) throw std::invalid_argument("constants c and c' must be positive");
    BoundReport r;
    r.name = "sucb";
    const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(n, 1)));
    const ArmSet a_star = optimal_arm_set(s);
    const std::size_t best = s.true_model().optimal_arm();
    r.flags["empty_optimistic_set"] = false;
    r.flags["vacuous"] = false;
    for (std::size_t i : a_star) {
        if (i == best) continue;
        BoundTerm t;
        t.arm = i;
        t.gap = suboptimality_gap(s.true_model(), i);
        t.psi = psi(s, optimistic_models(s, i), ArmSet{i}).value;
        if (std::isinf(t.psi)) {
            t.value = 0.0;
            t.note = "no optimistic model; never pulled";
            r.flags["empty_optimistic_set"] = true;
        } else if (t.psi == 0.0) {
            t.value = kInfinity;
            t.note = "psi is zero";
            r.flags["vacuous"] = true;
        } else {
            t.value = c * t.gap * log_n / t.psi;
        }
        r.terms.push_back(t);
    }
    r.constant = c_prime;
    r.value = r.recompute();
    return r;
}

inline BoundReport ucb_reference_bound(const Structure& s, std::uint64_t n, double c, double c_prime) {
    BoundReport r;
    r.name = "ucb";
    const double log_n = std::log(static_cast<double>(std::max<std::uint64_t>(n, 1)));
    const auto& truth = s.true_model();
    for (std::size_t i = 0; i < s.arm_count(); ++i) {
        const double gap = suboptimality_gap(truth, i);
        if (!(gap > 0.0)) continue;
        BoundTerm t;
        t.arm = i;
        t.gap = gap;
        t.psi = gap * gap;
        t.value = c * log_n / gap;
        r.terms.push_back(t);
    }
    r.constant = c_prime;
    r.value = r.recompute();
    return r;
}

/// Smallest natural y >= 1 with z >= x ln z for every real z >= y.
inline std::uint64_t omega(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("omega needs x > 0");
    if (x <= kEuler) return 1;
    const auto f = [x](double z) { return z - x * std::log(z); };
    // f is negative at its minimum z = x and increasing beyond it.
    double lo = x, hi = 2.0 * x;
    while (f(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    auto y = static_cast<std::uint64_t>(std::ceil(hi));
    while (f(static_cast<double>(y)) < 0.0) ++y;
    while (y > 1 && static_cast<double>(y - 1) > x && f(static_cast<double>(y - 1)) >= 0.0) --y;
    return y;
}

inline BoundReport lower_bound_cr(const Structure& s, double c, std::uint64_t n) {
    if (!(c > 0.0)) throw std::invalid_argument("constant c must be positive");
    if (!is_constant_regret_structure(s)) throw std::invalid_argument("structure is not a constant-regret worst case");
    BoundReport r;
    r.name = "lower";
    const auto& truth = s.true_model();
    const std::size_t best = truth.optimal_arm();
    const double g = gamma_star(s);
    const double floor = delta_floor(s);
    double d = 0.0;
    for (std::size_t i = 0; i < s.arm_count(); ++i)
        if (i != best) d += 1.0 / std::pow(suboptimality_gap(truth, i), 2);
    const double g2 = g * g;
    const double argument = floor * floor / (4.0 * kEuler * kEuler * c * g2 * std::log(1.0 / g2));
    const double log_arg = std::log(argument);
    const bool finite_gap = std::isfinite(g) && g > 0.0;
    r.extras["gamma_star"] = g;
    r.extras["delta_floor"] = floor;
    r.extras["d"] = d;
    r.extras["log_argument"] = argument;
    const std::uint64_t w = omega(2.0 * c * d);
    r.extras["omega"] = static_cast<double>(w);
    r.flags["horizon_large_enough"] = finite_gap && static_cast<double>(n) >= 1.0 / g2;
    r.flags["gamma_star_small_enough"] = finite_gap && g <= std::sqrt(1.0 / static_cast<double>(w));
    const bool vacuous = !finite_gap || !(argument > 1.0);
    r.flags["vacuous"] = vacuous;
    for (std::size_t i = 0; i < s.arm_count(); ++i) {
        if (i == best) continue;
        BoundTerm t;
        t.arm = i;
        t.gap = suboptimality_gap(truth, i);
        t.psi = psi(s, models_with_optimal_arm(s, i), ArmSet{i}).value;
        if (vacuous || std::isinf(t.psi)) {
            t.value = 0.0;
            if (std::isinf(t.psi)) t.note = "arm never optimal";
        } else {
            t.value = t.gap / (2.0 * t.psi) * log_arg;
        }
        r.terms.push_back(t);
    }
    r.constant = 0.0;
    r.value = r.recompute();
    return r;
}

}  // namespace structbandit
