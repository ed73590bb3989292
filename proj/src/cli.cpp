#include "tbo/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tbo/experiment.hpp"
#include "tbo/presets.hpp"

namespace tbo::cli {

namespace ex = tbo::experiment;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunArgs {
    std::string manifest;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::optional<std::string> out;
    std::optional<std::size_t> downsample;
};

struct StatsArgs {
    std::vector<std::string> files;
    std::string out = ".";
    double alpha = 0.01;
    std::string baseline = "island_model";
};

struct PlotArgs {
    std::vector<std::string> files;
    std::string out = ".";
    std::string log_scale = "auto";
};

struct PresetArgs {
    std::optional<std::string> name;
    std::optional<std::string> write_dir;
};

struct ValidateArgs {
    std::optional<std::string> manifest;
    std::vector<std::string> files;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
    ex::Manifest m = ex::load_manifest(a.manifest);
    ex::RunOptions opts;
    opts.seed = a.seed;
    if (a.out) opts.output_dir = fs::path(*a.out);
    opts.downsample = a.downsample;
    opts.jobs = a.jobs;
    const auto result = ex::run_manifest(std::move(m), opts, out);
    if (!result.ok()) {
        err << "error: " << result.failures.size() << " cell(s) failed\n";
        for (const auto& f : result.failures) err << "  " << f << '\n';
        return failure;
    }
    out << result.trace_files.size() << " trace file(s), " << result.summary_files.size() << " summary file(s)\n";
    return ok;
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
    std::vector<ex::SummaryRow> rows;
    for (const auto& f : a.files) {
        auto r = ex::read_summary_csv(f);
        rows.insert(rows.end(), r.begin(), r.end());
    }
    const auto comparisons = ex::compare_summaries(rows, a.alpha);
    const auto files = ex::write_stats_reports(comparisons, a.alpha, a.baseline, a.out);
    std::ifstream txt(files.report_txt);
    out << txt.rdbuf();
    std::ifstream t3(files.table3_txt);
    out << '\n' << t3.rdbuf();
    return ok;
}

int cmd_plot(const PlotArgs& a, std::ostream& out) {
    std::vector<fs::path> files(a.files.begin(), a.files.end());
    for (const auto& p : ex::plot_traces(files, a.out, ex::parse_log_scale(a.log_scale))) out << "wrote " << p.string() << '\n';
    return ok;
}

int cmd_presets(const PresetArgs& a, std::ostream& out, std::ostream& err) {
    if (a.write_dir) {
        fs::create_directories(*a.write_dir);
        for (const auto& p : builtin_presets()) {
            const fs::path path = fs::path(*a.write_dir) / (p.key + ".json");
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            f << config_to_json(p.config).dump(2) << '\n';
            out << "wrote " << path.string() << '\n';
        }
        return ok;
    }
    if (a.name) {
        const auto p = find_preset(*a.name);
        if (!p) {
            err << "error: unknown preset '" << *a.name << "'; known presets:";
            for (const auto& q : builtin_presets()) err << ' ' << q.key;
            err << '\n';
            return input_error;
        }
        out << config_to_json(p->config).dump(2) << '\n';
        return ok;
    }
    json all = json::object();
    for (const auto& p : builtin_presets()) all[p.key] = config_to_json(p.config);
    out << all.dump(2) << '\n';
    return ok;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    if (!a.manifest && a.files.empty()) {
        err << "error: validate needs --manifest PATH or config files\n";
        return input_error;
    }
    std::vector<std::string> issues;
    if (a.manifest) {
        try {
            for (auto& i : ex::manifest_problems(ex::load_manifest(*a.manifest))) issues.push_back(*a.manifest + ": " + i);
        } catch (const ex::InputError& e) {
            issues.push_back(*a.manifest + ": " + e.what());
        }
    }
    for (const auto& f : a.files) {
        try {
            std::ifstream in(f);
            if (!in) throw ex::InputError("cannot open file");
            const TboConfig cfg = config_from_json(json::parse(in));
            for (auto& i : config_problems(cfg)) issues.push_back(f + ": " + i);
        } catch (const std::exception& e) {
            issues.push_back(f + ": " + e.what());
        }
    }
    if (issues.empty()) {
        out << "ok\n";
        return ok;
    }
    for (const auto& i : issues) err << i << '\n';
    return input_error;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trust-based island-model optimizer: experiments, statistics and charts", "tbo"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Execute every problem x algorithm x repetition cell of a manifest");
    run->add_option("--manifest", run_args.manifest, "Experiment manifest (JSON)")->required();
    run->add_option("--seed", run_args.seed, "Root seed (overrides the manifest)");
    run->add_option("--jobs", run_args.jobs, "Cells executed in parallel")->check(CLI::PositiveNumber);
    run->add_option("--out", run_args.out, "Output directory (overrides the manifest)");
    run->add_option("--downsample", run_args.downsample, "Record every K-th step")->check(CLI::PositiveNumber);

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Kruskal-Wallis and Dunn/Holm comparison of summary CSVs");
    stats->add_option("files", stats_args.files, "Summary CSV files")->required()->check(CLI::ExistingFile);
    stats->add_option("--out", stats_args.out, "Report directory");
    stats->add_option("--alpha", stats_args.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    stats->add_option("--baseline", stats_args.baseline, "Reference algorithm key");

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render SVG convergence charts from trace CSVs");
    plot->add_option("files", plot_args.files, "Trace CSV files")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_args.out, "Chart directory");
    plot->add_option("--log-scale", plot_args.log_scale, "auto|on|off")->check(CLI::IsMember({"auto", "on", "off"}));

    PresetArgs preset_args;
    auto* presets = app.add_subcommand("presets", "Print the shipped configuration presets as JSON");
    presets->add_option("name", preset_args.name, "Preset key or display name");
    presets->add_option("--write-dir", preset_args.write_dir, "Write every preset to DIR/<key>.json");

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Check a manifest or config files without running");
    validate->add_option("--manifest", validate_args.manifest, "Experiment manifest (JSON)");
    validate->add_option("files", validate_args.files, "Config/preset JSON files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    }

    try {
        if (*run) return cmd_run(run_args, out, err);
        if (*stats) return cmd_stats(stats_args, out);
        if (*plot) return cmd_plot(plot_args, out);
        if (*presets) return cmd_presets(preset_args, out, err);
        if (*validate) return cmd_validate(validate_args, out, err);
    } catch (const ex::InputError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}

}  // namespace tbo::cli
