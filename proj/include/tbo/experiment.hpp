#pragma once

/// @file experiment.hpp
/// @brief Experiment manifests, CSV traces and summaries, comparison reports and
/// SVG convergence charts.
///
/// File layout written by run_manifest under the output directory:
///   traces/<objective>-d<D>__<algorithm>__rep<r>.csv   step,agent_id,best,mean
///   summary_<objective>-d<D>.csv   problem,dim,algorithm,repetition,final_best,steps,seed

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tbo/core.hpp"
#include "tbo/stats.hpp"

namespace tbo::experiment {

namespace fs = std::filesystem;

/// Bad user input (manifest, flags, files). The CLI maps it to exit status 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemSpec {
    std::string objective;
    std::size_t dimension = 0;
    std::size_t steps = 0;
    ObjectiveParams params;
    [[nodiscard]] std::string key() const { return objective + "-d" + std::to_string(dimension); }
};

struct AlgorithmRef {
    std::string key;
    TboConfig config;
};

struct Manifest {
    std::string name = "experiment";
    std::vector<ProblemSpec> problems;
    std::vector<AlgorithmRef> algorithms;
    std::size_t repetitions = 1;
    fs::path output_dir = "results";
    std::uint64_t seed = 1;
    std::size_t downsample = 1;
};

/// Resolves preset names, relative preset files (against base_dir) and inline
/// configs. Throws InputError naming the first unresolvable entry.
Manifest parse_manifest(const nlohmann::json& j, const fs::path& base_dir = ".");
Manifest load_manifest(const fs::path& path);

/// Every constraint the manifest violates, including each cell's config problems.
std::vector<std::string> manifest_problems(const Manifest& m);

/// Config of one (problem, algorithm) cell; repetitions are derived from its seed.
TboConfig cell_config(const Manifest& m, const ProblemSpec& problem, const AlgorithmRef& algorithm);

std::string trace_file_name(const std::string& problem_key, const std::string& algorithm_key, std::size_t rep);
std::string summary_file_name(const std::string& problem_key);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> output_dir;
    std::optional<std::size_t> downsample;
    std::size_t jobs = 1;
};

struct RunResult {
    std::vector<fs::path> trace_files;
    std::vector<fs::path> summary_files;
    std::vector<std::string> failures;
    [[nodiscard]] bool ok() const noexcept { return failures.empty(); }
};

/// Executes every (problem x algorithm x repetition) cell and writes traces and summaries.
RunResult run_manifest(Manifest m, const RunOptions& options, std::ostream& log);

// ---------------------------------------------------------------------------
// CSV

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_trace_csv(const fs::path& path, const ConvergenceTrace& trace);
std::vector<TraceRecord> read_trace_csv(const fs::path& path);

struct SummaryRow {
    std::string problem;
    std::size_t dim = 0;
    std::string algorithm;
    std::size_t repetition = 0;
    double final_best = 0.0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const fs::path& path);

// ---------------------------------------------------------------------------
// Comparison reports

struct ProblemComparison {
    std::string problem;
    std::size_t dim = 0;
    std::vector<stats::SampleGroup> groups;
    std::vector<stats::Summary> summaries;
    stats::TestReport report;  ///< Kruskal-Wallis omnibus plus Dunn/Holm pairs
};

/// Groups rows by (problem, dim) and algorithm, both in order of first appearance.
/// Throws InputError when a problem has fewer than two algorithm groups.
std::vector<ProblemComparison> compare_summaries(const std::vector<SummaryRow>& rows, double alpha);

struct StatsFiles {
    fs::path report_csv, report_txt, table2_csv, table2_txt, table3_csv, table3_txt;
};

/// Writes stats_report.{csv,txt}, table2.{csv,txt} and table3.{csv,txt}.
StatsFiles write_stats_reports(const std::vector<ProblemComparison>& comparisons, double alpha,
                               const std::string& baseline, const fs::path& out_dir);

// ---------------------------------------------------------------------------
// Charts

enum class LogScale { automatic, on, off };
LogScale parse_log_scale(const std::string& s);

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  ///< (step, best-so-far)
};

/// Fixed palette: strong_leadership blue, exploration green, small_society magenta,
/// large_society red, high_diversity yellow, island_model cyan.
std::string series_color(const std::string& label, std::size_t fallback_index);

/// Best-so-far curve of one trace: per step minimum over agents, then running minimum.
std::vector<std::pair<double, double>> best_so_far_curve(const std::vector<TraceRecord>& records);

/// SVG 1.1 line chart, 960x540. Throws InputError when every series is empty.
std::string render_convergence_svg(const std::string& title, const std::vector<Series>& series, LogScale scale);

/// One chart per problem key found in the trace file names; repetitions are averaged.
std::vector<fs::path> plot_traces(const std::vector<fs::path>& trace_files, const fs::path& out_dir, LogScale scale);

}  // namespace tbo::experiment
