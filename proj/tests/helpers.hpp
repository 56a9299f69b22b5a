#pragma once

#include <cstdint>
#include <vector>

#include "oracles.hpp"
#include "structbandit/structbandit.hpp"

namespace testing_helpers {

using structbandit::BanditModel;
using structbandit::Structure;

inline Structure make_structure(const std::vector<std::vector<double>>& means, std::size_t truth = 0) {
    std::vector<BanditModel> models;
    for (const auto& m : means) models.emplace_back(m);
    return Structure(std::move(models), truth);
}

inline oracle::Matrix matrix_of(const Structure& s) {
    oracle::Matrix out;
    for (const auto& m : s.models()) out.push_back(m.means());
    return out;
}

inline std::vector<std::size_t> plain(const structbandit::ArmSet& a) { return a.items(); }
inline std::vector<std::size_t> plain(const structbandit::ModelSubset& a) { return a.items(); }

/// Random structures of varying shape, mixing generated hard models with
/// uniform ones.
inline std::vector<Structure> random_structures(std::size_t count, std::uint64_t seed) {
    structbandit::Rng rng(seed);
    std::vector<Structure> out;
    for (std::size_t k = 0; k < count; ++k) {
        structbandit::GeneratorSpec spec;
        spec.arm_count = 3 + static_cast<std::size_t>(rng.below(48));
        spec.base_model_count = 1 + static_cast<std::size_t>(rng.below(75));
        spec.hard_model_count = static_cast<std::size_t>(rng.below(75));
        spec.seed = rng();
        out.push_back(structbandit::generate_random(spec));
    }
    return out;
}

}  // namespace testing_helpers
