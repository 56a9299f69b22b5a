#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "io.hpp"
#include "rng.hpp"
#include "simulate.hpp"
#include "stats.hpp"
#include "structures.hpp"

namespace structbandit {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct StructureSource {
    std::string builder = "figure_left";  // figure_left | figure_right | random | file
    std::size_t grid_per_region = 17;
    bool informative_arm2 = true;
    double arm2_region4 = 0.92;
    GeneratorSpec generator;
    std::string path;
    bool per_run = false;  // build a fresh structure for every run index
};

struct AlgorithmEntry {
    std::string label;
    AgentConfig config;
};

struct ExperimentConfig {
    StructureSource structure;
    std::vector<AlgorithmEntry> algorithms;
    std::uint64_t horizon = 10000;
    std::size_t runs = 100;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> checkpoints;  // empty: default geometric schedule
    std::size_t checkpoint_count = 200;
    double confidence = 0.95;
    bool audit = false;

    void validate() const {
        if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
        if (runs < 2) throw std::invalid_argument("runs must be >= 2 for confidence intervals");
        if (algorithms.empty()) throw std::invalid_argument("no algorithms configured");
        if (!(confidence > 0.5 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0.5, 1)");
        std::set<std::string> labels;
        for (const auto& a : algorithms) {
            if (a.label.empty()) throw std::invalid_argument("algorithm label must not be empty");
            if (!labels.insert(a.label).second) throw std::invalid_argument("duplicate algorithm label '" + a.label + "'");
            AgentConfig c = a.config;
            if (c.horizon == 0) c.horizon = horizon;
            c.validate();
        }
        if (!checkpoints.empty()) {
            for (std::size_t i = 1; i < checkpoints.size(); ++i)
                if (checkpoints[i] <= checkpoints[i - 1]) throw std::invalid_argument("checkpoints must increase strictly");
            if (checkpoints.front() == 0 || checkpoints.back() != horizon)
                throw std::invalid_argument("checkpoints must lie in [1, horizon] and end at the horizon");
        }
    }
};

/// About `count` geometrically spaced steps in [1, n], always ending at n.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t n, std::size_t count = 200) {
    std::vector<std::uint64_t> out;
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t j = 1; j <= count; ++j) {
        const double v = std::ceil(std::exp(log_n * static_cast<double>(j) / static_cast<double>(count)) - 1e-9);
        const auto c = std::clamp<std::uint64_t>(static_cast<std::uint64_t>(v), 1, n);
        if (out.empty() || c > out.back()) out.push_back(c);
    }
    if (out.empty() || out.back() != n) out.push_back(n);
    return out;
}

inline std::uint64_t structure_seed(std::uint64_t base_seed, std::size_t run) {
    return stable_hash(base_seed, fnv1a("structure"), run);
}

inline Structure build_structure(const StructureSource& src, std::optional<std::uint64_t> seed_override = std::nullopt) {
    if (src.builder == "figure_left") return build_figure_left(src.grid_per_region, src.informative_arm2);
    if (src.builder == "figure_right") return build_figure_right(src.arm2_region4);
    if (src.builder == "random") {
        GeneratorSpec spec = src.generator;
        if (seed_override) spec.seed = *seed_override;
        return generate_random(spec);
    }
    if (src.builder == "file") return load(src.path);
    throw std::invalid_argument("unknown structure builder '" + src.builder + "'");
}

struct AggregateResult {
    std::string label;
    std::vector<std::uint64_t> checkpoints;
    std::vector<Interval> regret;
    std::vector<Interval> pulls;
    std::size_t runs = 0;
    std::size_t degrees_of_freedom = 0;
};

struct BatchResult {
    std::vector<AggregateResult> aggregates;      // one per algorithm, config order
    std::vector<std::vector<RunResult>> runs;     // [algorithm][run]
    std::vector<std::uint64_t> checkpoints;
};

inline AggregateResult aggregate(const std::string& label, const std::vector<RunResult>& runs, double level) {
    AggregateResult a;
    a.label = label;
    a.runs = runs.size();
    a.degrees_of_freedom = runs.size() - 1;
    a.checkpoints = runs.front().checkpoints;
    std::vector<double> column(runs.size());
    for (std::size_t c = 0; c < a.checkpoints.size(); ++c) {
        for (std::size_t r = 0; r < runs.size(); ++r) column[r] = runs[r].regret[c];
        a.regret.push_back(t_interval(column, level));
    }
    for (std::size_t arm = 0; arm < runs.front().pull_counts.size(); ++arm) {
        for (std::size_t r = 0; r < runs.size(); ++r) column[r] = static_cast<double>(runs[r].pull_counts[arm]);
        a.pulls.push_back(t_interval(column, level));
    }
    return a;
}

inline std::size_t default_workers() {
    if (const char* env = std::getenv("STRUCTBANDIT_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every (algorithm, run) pair. Results do not depend on the worker count.
inline BatchResult run_batch(const ExperimentConfig& config, std::size_t workers = 1) {
    config.validate();
    const auto checkpoints =
        config.checkpoints.empty() ? default_checkpoints(config.horizon, config.checkpoint_count) : config.checkpoints;
    std::optional<Structure> shared;
    if (!config.structure.per_run) shared = build_structure(config.structure);

    const std::size_t algs = config.algorithms.size();
    const std::size_t total = algs * config.runs;
    BatchResult batch;
    batch.checkpoints = checkpoints;
    batch.runs.assign(algs, std::vector<RunResult>(config.runs));
    std::vector<std::string> errors(total);

    std::atomic<std::size_t> next{0};
    const auto work = [&]() {
        for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
            const std::size_t a = job / config.runs, r = job % config.runs;
            const auto& entry = config.algorithms[a];
            const std::uint64_t seed = run_seed(config.base_seed, entry.label, r);
            try {
                std::optional<Structure> local;
                if (!shared) local = build_structure(config.structure, structure_seed(config.base_seed, r));
                const Structure& s = shared ? *shared : *local;
                AgentConfig ac = entry.config;
                if (ac.horizon == 0) ac.horizon = config.horizon;
                auto agent = make_agent(s, ac);
                Environment env(s, seed);
                RunResult res = simulate(*agent, env, config.horizon, checkpoints, config.audit);
                res.label = entry.label;
                res.seed = seed;
                batch.runs[a][r] = std::move(res);
            } catch (const std::exception& e) {
                errors[job] = "algorithm '" + entry.label + "', run " + std::to_string(r) + ", seed " +
                              std::to_string(seed) + ": " + e.what();
            }
        }
    };
    workers = std::max<std::size_t>(1, std::min(workers, total));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("run failed: " + e);
    for (std::size_t a = 0; a < algs; ++a)
        batch.aggregates.push_back(aggregate(config.algorithms[a].label, batch.runs[a], config.confidence));
    return batch;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string regret_csv(const AggregateResult& a) {
    std::string out = "checkpoint,mean_regret,ci_half_width\n";
    for (std::size_t c = 0; c < a.checkpoints.size(); ++c)
        out += std::to_string(a.checkpoints[c]) + "," + format_double(a.regret[c].mean) + "," +
               format_double(a.regret[c].half_width) + "\n";
    return out;
}

inline std::string pulls_csv(const AggregateResult& a) {
    std::string out = "arm,mean_pulls,ci_half_width\n";
    for (std::size_t i = 0; i < a.pulls.size(); ++i)
        out += std::to_string(i) + "," + format_double(a.pulls[i].mean) + "," + format_double(a.pulls[i].half_width) + "\n";
    return out;
}

// ---- config documents ----

inline Json to_json(const StructureSource& s) {
    Json j = {{"builder", s.builder}, {"per_run", s.per_run}};
    if (s.builder == "figure_left") {
        j["grid_per_region"] = s.grid_per_region;
        j["informative_arm2"] = s.informative_arm2;
    } else if (s.builder == "figure_right") {
        j["arm2_region4"] = s.arm2_region4;
    } else if (s.builder == "random") {
        j["base_model_count"] = s.generator.base_model_count;
        j["arm_count"] = s.generator.arm_count;
        j["hard_model_count"] = s.generator.hard_model_count;
        j["seed"] = s.generator.seed;
        j["optimistic_scale"] = s.generator.optimistic_scale;
        j["shrink_factor"] = s.generator.shrink_factor;
    } else if (s.builder == "file") {
        j["path"] = s.path;
    }
    return j;
}

inline Json to_json(const ExperimentConfig& c) {
    Json algs = Json::array();
    for (const auto& a : c.algorithms)
        algs.push_back({{"name", to_string(a.config.algorithm)},
                        {"label", a.label},
                        {"alpha", a.config.alpha},
                        {"beta", a.config.beta},
                        {"eta", a.config.eta},
                        {"variance_multiplier", a.config.variance_multiplier}});
    Json j = {{"structure", to_json(c.structure)}, {"algorithms", algs},        {"horizon", c.horizon},
              {"runs", c.runs},                    {"base_seed", c.base_seed},  {"confidence", c.confidence}};
    if (c.checkpoints.empty())
        j["checkpoints"] = c.checkpoint_count;
    else
        j["checkpoints"] = c.checkpoints;
    return j;
}

inline StructureSource structure_source_from_json(const Json& j) {
    StructureSource s;
    s.builder = detail::require(j, "builder").get<std::string>();
    s.per_run = j.value("per_run", false);
    s.grid_per_region = j.value("grid_per_region", s.grid_per_region);
    s.informative_arm2 = j.value("informative_arm2", s.informative_arm2);
    s.arm2_region4 = j.value("arm2_region4", s.arm2_region4);
    auto& g = s.generator;
    g.base_model_count = j.value("base_model_count", g.base_model_count);
    g.arm_count = j.value("arm_count", g.arm_count);
    g.hard_model_count = j.value("hard_model_count", g.hard_model_count);
    g.seed = j.value("seed", g.seed);
    g.optimistic_scale = j.value("optimistic_scale", g.optimistic_scale);
    g.shrink_factor = j.value("shrink_factor", g.shrink_factor);
    s.path = j.value("path", std::string{});
    if (s.builder == "file" && s.path.empty()) throw FormatError("structure builder 'file' needs a 'path'");
    if (s.builder != "figure_left" && s.builder != "figure_right" && s.builder != "random" && s.builder != "file")
        throw FormatError("unknown structure builder '" + s.builder + "'");
    return s;
}

inline ExperimentConfig experiment_from_json(const Json& j) {
    try {
        ExperimentConfig c;
        c.structure = structure_source_from_json(detail::require(j, "structure"));
        const Json& algs = detail::require(j, "algorithms");
        if (!algs.is_array()) throw FormatError("field 'algorithms' must be an array");
        for (const auto& a : algs) {
            AlgorithmEntry e;
            const std::string name = detail::require(a, "name").get<std::string>();
            e.config.algorithm = parse_algorithm(name);
            e.label = a.value("label", to_string(e.config.algorithm));
            e.config.alpha = a.value("alpha", e.config.alpha);
            e.config.beta = a.value("beta", e.config.beta);
            e.config.eta = a.value("eta", e.config.eta);
            e.config.variance_multiplier = a.value("variance_multiplier", e.config.variance_multiplier);
            c.algorithms.push_back(e);
        }
        c.horizon = detail::require(j, "horizon").get<std::uint64_t>();
        c.runs = j.value("runs", c.runs);
        c.base_seed = j.value("base_seed", c.base_seed);
        c.confidence = j.value("confidence", c.confidence);
        c.audit = j.value("audit", false);
        if (j.contains("checkpoints")) {
            const Json& cp = j.at("checkpoints");
            if (cp.is_array())
                c.checkpoints = cp.get<std::vector<std::uint64_t>>();
            else
                c.checkpoint_count = cp.get<std::size_t>();
        }
        c.validate();
        return c;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("invalid experiment config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid experiment config: ") + e.what());
    }
}

inline Json manifest_json(const ExperimentConfig& c, const BatchResult& b) {
    Json seeds = Json::object();
    for (const auto& a : c.algorithms) {
        Json list = Json::array();
        for (std::size_t r = 0; r < c.runs; ++r) list.push_back(run_seed(c.base_seed, a.label, r));
        seeds[a.label] = list;
    }
    Json j = {{"library_version", kLibraryVersion},
              {"config", to_json(c)},
              {"checkpoints", b.checkpoints},
              {"seeds", seeds},
              {"rng", "xoshiro256** seeded by SplitMix64; run seed = stable_hash(base_seed, fnv1a(label), run)"}};
    if (c.structure.per_run) {
        Json ss = Json::array();
        for (std::size_t r = 0; r < c.runs; ++r) ss.push_back(structure_seed(c.base_seed, r));
        j["structure_seeds"] = ss;
    }
    return j;
}

/// Writes regret_<label>.csv, pulls_<label>.csv and manifest.json into `dir`.
inline void write_batch_outputs(const std::string& dir, const ExperimentConfig& c, const BatchResult& b) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    for (const auto& a : b.aggregates) {
        write_text_file((base / ("regret_" + a.label + ".csv")).string(), regret_csv(a));
        write_text_file((base / ("pulls_" + a.label + ".csv")).string(), pulls_csv(a));
    }
    write_text_file((base / "manifest.json").string(), manifest_json(c, b).dump(2) + "\n");
}

}  // namespace structbandit
