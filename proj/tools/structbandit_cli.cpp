#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <structbandit/structbandit.hpp>

namespace fs = std::filesystem;
using namespace structbandit;

namespace {

/// Bad invocation or unusable input files: exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const Json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        if (fs::path(out_path).has_parent_path()) fs::create_directories(fs::path(out_path).parent_path());
        write_text_file(out_path, text);
    }
}

Structure load_structure_arg(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("structure file not found: " + path);
    try {
        return load(path);
    } catch (const FormatError& e) {
        throw UsageError(e.what());
    } catch (const StructureError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

ExperimentConfig load_config_arg(const std::string& path) {
    if (!fs::exists(path)) throw UsageError("config file not found: " + path);
    try {
        ExperimentConfig c = experiment_from_json(read_json_file(path));
        if (c.structure.builder == "file" && fs::path(c.structure.path).is_relative())
            c.structure.path = (fs::path(path).parent_path() / c.structure.path).string();
        return c;
    } catch (const FormatError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void print_summary(const BatchResult& b) {
    for (const auto& a : b.aggregates)
        std::printf("%-8s final regret %.3f +- %.3f (%zu runs)\n", a.label.c_str(), a.regret.back().mean,
                    a.regret.back().half_width, a.runs);
}

struct TheoryArgs {
    std::string structure;
    std::string bound = "all";
    bool sequences = false;
    double alpha = 4.0;
    double beta = 2.0;
    std::uint64_t n = 500000;
    double c = 8.0;
    double c_prime = 1.0;
    std::string out;
};

Json bound_or_error(const std::string& name, const std::function<BoundReport()>& f) {
    try {
        return to_json(f());
    } catch (const std::exception& e) {
        return Json{{"bound", name}, {"error", e.what()}};
    }
}

int cmd_theory(const TheoryArgs& a) {
    const Structure s = load_structure_arg(a.structure);
    Json doc = {{"structure", a.structure},
                {"gamma_star", detail::number(gamma_star(s))},
                {"delta_floor", detail::number(delta_floor(s))},
                {"optimal_arms", optimal_arm_set(s).items()}};
    std::optional<TheorySequences> seq;
    std::string seq_error;
    try {
        seq = deterministic_sequences(s, a.alpha, a.beta, a.n);
    } catch (const std::exception& e) {
        seq_error = e.what();
    }
    const auto wants = [&](const char* name) { return a.bound == "all" || a.bound == name; };
    Json bounds = Json::array();
    if (wants("sae"))
        bounds.push_back(bound_or_error("sae", [&] {
            if (!seq) throw std::invalid_argument(seq_error);
            return sae_bound(s, *seq, a.n);
        }));
    if (wants("asae")) bounds.push_back(bound_or_error("asae", [&] { return asae_bound(s, a.n); }));
    if (wants("const")) bounds.push_back(bound_or_error("const", [&] { return asae_constant_bound(s); }));
    if (wants("sucb")) bounds.push_back(bound_or_error("sucb", [&] { return sucb_bound(s, a.n, a.c, a.c_prime); }));
    if (wants("ucb")) bounds.push_back(bound_or_error("ucb", [&] { return ucb_reference_bound(s, a.n, a.c, a.c_prime); }));
    if (wants("lower")) bounds.push_back(bound_or_error("lower", [&] { return lower_bound_cr(s, a.c, a.n); }));
    doc["bounds"] = bounds;
    if (a.sequences) doc["sequences"] = seq ? to_json(*seq) : Json{{"error", seq_error}};
    emit(doc, a.out);
    return 0;
}

struct ClassifyArgs {
    std::string structure;
    std::optional<double> beta;
    double alpha = 4.0;
    std::uint64_t n = 500000;
    std::string out;
};

int cmd_classify(const ClassifyArgs& a) {
    const Structure s = load_structure_arg(a.structure);
    Classification c;
    if (a.beta && *a.beta > 1.0) {
        c = classify(s, deterministic_sequences(s, a.alpha, *a.beta, a.n));
    } else {
        c = classify(s);
    }
    Json doc = {{"structure", a.structure},
                {"worst_case", c.in_wc},
                {"constant_regret", c.in_cr},
                {"optimistic", c.in_opt ? Json(*c.in_opt) : Json(nullptr)},
                {"gamma_star", detail::number(gamma_star(s))},
                {"delta_floor", detail::number(delta_floor(s))},
                {"optimal_arms", optimal_arm_set(s).items()}};
    emit(doc, a.out);
    return 0;
}

struct GenArgs {
    std::string builder = "figure_left";
    std::size_t grid = 17;
    bool non_informative = false;
    double arm2_region4 = 0.92;
    GeneratorSpec spec;
    std::string out;
};

int cmd_gen(const GenArgs& a) {
    StructureSource src;
    src.builder = a.builder;
    src.grid_per_region = a.grid;
    src.informative_arm2 = !a.non_informative;
    src.arm2_region4 = a.arm2_region4;
    src.generator = a.spec;
    Structure s = [&] {
        try {
            return build_structure(src);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (fs::path(a.out).has_parent_path()) fs::create_directories(fs::path(a.out).parent_path());
    save(s, a.out);
    std::printf("wrote %zu models x %zu arms to %s\n", s.model_count(), s.arm_count(), a.out.c_str());
    return 0;
}

struct RunArgs {
    std::string config;
    std::string out = "results";
    std::size_t workers = 0;
    std::optional<std::uint64_t> seed;
};

int cmd_run(const RunArgs& a) {
    ExperimentConfig c = load_config_arg(a.config);
    if (a.seed) c.base_seed = *a.seed;
    const BatchResult b = run_batch(c, a.workers == 0 ? default_workers() : a.workers);
    write_batch_outputs(a.out, c, b);
    print_summary(b);
    return 0;
}

struct SuiteArgs {
    std::string scale = "desk";
    std::string out = "paper_suite";
    std::size_t workers = 0;
    std::uint64_t seed = 0;
};

int cmd_suite(const SuiteArgs& a) {
    const bool full = a.scale == "full";
    const std::size_t workers = a.workers == 0 ? default_workers() : a.workers;
    const fs::path root(a.out);
    fs::create_directories(root / "fig4");
    std::vector<std::string> lines;
    for (const std::string name : {"fig3a", "fig3b", "fig3c", "fig3d"}) {
        const ExperimentConfig c = figure_experiment(name, full, a.seed);
        std::printf("%s: %zu algorithms x %zu runs, n = %llu\n", name.c_str(), c.algorithms.size(), c.runs,
                    static_cast<unsigned long long>(c.horizon));
        const BatchResult b = run_batch(c, workers);
        write_batch_outputs((root / name).string(), c, b);
        write_text_file((root / name / "config.json").string(), to_json(c).dump(2) + "\n");
        if (name != "fig3d")
            for (const auto& agg : b.aggregates)
                write_text_file((root / "fig4" / ("pulls_" + name + "_" + agg.label + ".csv")).string(), pulls_csv(agg));
        for (const auto& [lo, hi] : expected_orderings(name)) {
            const OrderingCheck chk = check_ordering(b, lo, hi);
            lines.push_back(std::string(chk.passed ? "PASS " : "FAIL ") + name + ": " + chk.description);
        }
        if (name == "fig3c") {
            const double pulls = find_aggregate(b, "SUCB").pulls.at(3).mean;
            char buf[128];
            std::snprintf(buf, sizeof buf, "fig3c: SUCB mean pulls of arm 3 = %.3f < 2", pulls);
            lines.push_back(std::string(pulls < 2.0 ? "PASS " : "FAIL ") + buf);
        }
    }
    std::string summary;
    for (const auto& l : lines) summary += l + "\n";
    write_text_file((root / "summary.txt").string(), summary);
    std::cout << summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured bandit simulation and analysis"};
    app.require_subcommand(1);

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run a batch experiment from a config file");
    run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: STRUCTBANDIT_WORKERS or cores)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Override the base seed");
    std::string run_scale;
    run_cmd->add_option("--scale", run_scale, "Ignored for single experiments");

    TheoryArgs theory;
    auto* theory_cmd = app.add_subcommand("theory", "Evaluate bounds and elimination sequences");
    theory_cmd->add_option("--structure", theory.structure, "Structure file (JSON)")->required();
    theory_cmd->add_option("--bound", theory.bound, "Bound to evaluate")
        ->check(CLI::IsMember({"sae", "asae", "const", "sucb", "ucb", "lower", "all"}));
    theory_cmd->add_flag("--sequences", theory.sequences, "Also emit the deterministic sequences");
    theory_cmd->add_option("--alpha", theory.alpha, "Confidence scale");
    theory_cmd->add_option("--beta", theory.beta, "Margin parameter (> 1 for sequences)");
    theory_cmd->add_option("--n", theory.n, "Horizon");
    theory_cmd->add_option("--c", theory.c, "Constant c");
    theory_cmd->add_option("--c-prime", theory.c_prime, "Constant c'");
    theory_cmd->add_option("--out", theory.out, "Output file (default: stdout)");

    ClassifyArgs cls;
    auto* cls_cmd = app.add_subcommand("classify", "Report structure classes");
    cls_cmd->add_option("--structure", cls.structure, "Structure file (JSON)")->required();
    cls_cmd->add_option("--beta", cls.beta, "Margin parameter; > 1 enables the optimistic-class test");
    cls_cmd->add_option("--alpha", cls.alpha, "Confidence scale for the sequences");
    cls_cmd->add_option("--n", cls.n, "Horizon for the sequences");
    cls_cmd->add_option("--out", cls.out, "Output file (default: stdout)");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Build a structure and save it");
    gen_cmd->add_option("--builder", gen.builder, "figure_left | figure_right | random")
        ->check(CLI::IsMember({"figure_left", "figure_right", "random"}));
    gen_cmd->add_option("--grid", gen.grid, "Grid points per region (figure_left)");
    gen_cmd->add_flag("--non-informative", gen.non_informative, "Constant arm 1 (figure_left)");
    gen_cmd->add_option("--arm2-region4", gen.arm2_region4, "Arm 1 mean in the fourth model (figure_right)");
    gen_cmd->add_option("--seed", gen.spec.seed, "Generator seed (random)");
    gen_cmd->add_option("--base-models", gen.spec.base_model_count, "Uniform models (random)");
    gen_cmd->add_option("--arms", gen.spec.arm_count, "Arm count (random)");
    gen_cmd->add_option("--hard-models", gen.spec.hard_model_count, "Hard models (random)");
    gen_cmd->add_option("--out", gen.out, "Output file")->required();

    SuiteArgs suite;
    auto* suite_cmd = app.add_subcommand("paper-suite", "Run all regret studies and pull tables");
    suite_cmd->add_option("--scale", suite.scale, "desk | full")->check(CLI::IsMember({"desk", "full"}));
    suite_cmd->add_option("--out", suite.out, "Output directory");
    suite_cmd->add_option("--workers", suite.workers, "Worker threads")->check(CLI::PositiveNumber);
    suite_cmd->add_option("--seed", suite.seed, "Base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*theory_cmd) return cmd_theory(theory);
        if (*cls_cmd) return cmd_classify(cls);
        if (*gen_cmd) return cmd_gen(gen);
        if (*suite_cmd) return cmd_suite(suite);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
