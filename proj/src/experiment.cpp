#include "tbo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <ostream>
#include <sstream>

#include "tbo/benchmarks.hpp"
#include "tbo/engine.hpp"
#include "tbo/presets.hpp"

#ifdef TBO_HAVE_OPENMP
#include <omp.h>
#endif

namespace tbo::experiment {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

template <typename T>
T parse_number(const std::string& s, const std::string& where) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw InputError(where + ": cannot parse '" + s + "'");
    return v;
}

AlgorithmRef resolve_algorithm(const json& entry, const fs::path& base_dir) {
    if (entry.is_string()) {
        const auto ref = entry.get<std::string>();
        if (ref.size() > 5 && ref.ends_with(".json")) {
            const fs::path p = fs::path(ref).is_absolute() ? fs::path(ref) : base_dir / ref;
            json j;
            try {
                j = json::parse(read_file(p));
            } catch (const json::exception& e) {
                throw InputError("preset file '" + p.string() + "': " + e.what());
            }
            try {
                TboConfig c = config_from_json(j);
                return {slugify(c.name), std::move(c)};
            } catch (const std::invalid_argument& e) {
                throw InputError("preset file '" + p.string() + "': " + e.what());
            }
        }
        auto preset = find_preset(ref);
        if (!preset) throw InputError("algorithms: unknown preset '" + ref + "'");
        return {preset->key, preset->config};
    }
    if (entry.is_object()) {
        json body = entry;
        TboConfig base;
        std::string key;
        if (body.contains("preset")) {
            const auto ref = body.at("preset").get<std::string>();
            auto preset = find_preset(ref);
            if (!preset) throw InputError("algorithms: unknown preset '" + ref + "'");
            base = preset->config;
            key = preset->key;
            body.erase("preset");
        }
        if (body.contains("key")) {
            key = body.at("key").get<std::string>();
            body.erase("key");
        }
        json merged = config_to_json(base);
        merged.merge_patch(body);
        try {
            TboConfig c = config_from_json(merged);
            if (key.empty()) key = slugify(c.name);
            return {key, std::move(c)};
        } catch (const std::invalid_argument& e) {
            throw InputError(std::string("algorithms: ") + e.what());
        }
    }
    throw InputError("algorithms: entries must be preset names, preset files or objects");
}

}  // namespace

Manifest parse_manifest(const json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw InputError("manifest: expected a JSON object");
    static const std::set<std::string> known = {"name", "problems", "algorithms", "repetitions", "output_dir",
                                                "seed", "downsample", "overrides"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw InputError("manifest: unknown field '" + k + "'");

    Manifest m;
    try {
        if (j.contains("name")) m.name = j.at("name").get<std::string>();
        if (j.contains("repetitions")) m.repetitions = j.at("repetitions").get<std::size_t>();
        if (j.contains("output_dir")) m.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("downsample")) m.downsample = j.at("downsample").get<std::size_t>();
    } catch (const json::exception& e) {
        throw InputError(std::string("manifest: ") + e.what());
    }

    if (!j.contains("problems") || !j.at("problems").is_array()) throw InputError("manifest: 'problems' array missing");
    for (const auto& p : j.at("problems")) {
        ProblemSpec ps;
        try {
            ps.objective = p.at("objective").get<std::string>();
            ps.dimension = p.at("dimension").get<std::size_t>();
            ps.steps = p.at("steps").get<std::size_t>();
            if (p.contains("noise_sigma")) ps.params.noise_sigma = p.at("noise_sigma").get<double>();
            if (p.contains("lj_a")) ps.params.lj_a = p.at("lj_a").get<double>();
            if (p.contains("lj_b")) ps.params.lj_b = p.at("lj_b").get<double>();
        } catch (const json::exception& e) {
            throw InputError(std::string("manifest problems: ") + e.what());
        }
        if (!is_registered_objective(ps.objective))
            throw InputError("manifest problems: unknown objective '" + ps.objective + "'");
        m.problems.push_back(std::move(ps));
    }

    if (!j.contains("algorithms") || !j.at("algorithms").is_array())
        throw InputError("manifest: 'algorithms' array missing");
    const json overrides = j.value("overrides", json::object());
    for (const auto& a : j.at("algorithms")) {
        AlgorithmRef ref = resolve_algorithm(a, base_dir);
        if (!overrides.empty()) {
            json merged = config_to_json(ref.config);
            merged.merge_patch(overrides);
            try {
                ref.config = config_from_json(merged);
            } catch (const std::invalid_argument& e) {
                throw InputError(std::string("manifest overrides: ") + e.what());
            }
        }
        m.algorithms.push_back(std::move(ref));
    }
    return m;
}

Manifest load_manifest(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw InputError("manifest '" + path.string() + "': " + e.what());
    }
    return parse_manifest(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

TboConfig cell_config(const Manifest& m, const ProblemSpec& problem, const AlgorithmRef& algorithm) {
    TboConfig c = algorithm.config;
    c.objective = problem.objective;
    c.dimension = problem.dimension;
    c.objective_params = problem.params;
    c.max_steps = problem.steps;
    c.repetitions = m.repetitions;
    c.downsample = m.downsample;
    // Every algorithm sees the same repetition seeds on a given problem.
    c.seed = derive_seed(m.seed, fnv1a(problem.key()));
    return c;
}

std::vector<std::string> manifest_problems(const Manifest& m) {
    std::vector<std::string> out;
    if (m.problems.empty()) out.emplace_back("manifest: no problems");
    if (m.algorithms.empty()) out.emplace_back("manifest: no algorithms");
    if (m.repetitions < 1) out.emplace_back("manifest: repetitions must be >= 1");
    if (m.downsample < 1) out.emplace_back("manifest: downsample must be >= 1");
    std::set<std::string> keys;
    for (const auto& a : m.algorithms)
        if (!keys.insert(a.key).second) out.push_back("manifest: duplicate algorithm key '" + a.key + "'");
    for (const auto& p : m.problems)
        for (const auto& a : m.algorithms)
            for (const auto& issue : config_problems(cell_config(m, p, a)))
                out.push_back(p.key() + "/" + a.key + ": " + issue);
    return out;
}

std::string trace_file_name(const std::string& problem_key, const std::string& algorithm_key, std::size_t rep) {
    return problem_key + "__" + algorithm_key + "__rep" + std::to_string(rep) + ".csv";
}

std::string summary_file_name(const std::string& problem_key) { return "summary_" + problem_key + ".csv"; }

RunResult run_manifest(Manifest m, const RunOptions& options, std::ostream& log) {
    if (options.seed) m.seed = *options.seed;
    if (options.output_dir) m.output_dir = *options.output_dir;
    if (options.downsample) m.downsample = *options.downsample;
    if (auto issues = manifest_problems(m); !issues.empty()) {
        std::string msg = issues.front();
        for (std::size_t k = 1; k < issues.size(); ++k) msg += "\n" + issues[k];
        throw InputError(msg);
    }

    struct Cell {
        const ProblemSpec* problem;
        const AlgorithmRef* algorithm;
        std::size_t rep;
    };
    std::vector<Cell> cells;
    for (const auto& p : m.problems)
        for (const auto& a : m.algorithms)
            for (std::size_t r = 0; r < m.repetitions; ++r) cells.push_back({&p, &a, r});

    const fs::path trace_dir = m.output_dir / "traces";
    fs::create_directories(trace_dir);

    std::vector<SummaryRow> rows(cells.size());
    std::vector<std::string> errors(cells.size());
    const auto count = static_cast<std::ptrdiff_t>(cells.size());
    const int jobs = static_cast<int>(std::max<std::size_t>(1, options.jobs));
    (void)jobs;
#ifdef TBO_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const Cell& cell = cells[static_cast<std::size_t>(k)];
        try {
            const TboConfig cfg = cell_config(m, *cell.problem, *cell.algorithm);
            const ConvergenceTrace trace = run_single(cfg, cell.rep, ExecPolicy::serial);
            write_trace_csv(trace_dir / trace_file_name(cell.problem->key(), cell.algorithm->key, cell.rep), trace);
            rows[static_cast<std::size_t>(k)] = {cell.problem->objective, cell.problem->dimension, cell.algorithm->key,
                                                 cell.rep, trace.global_best.fitness, cfg.max_steps, trace.seed};
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(k)] = "cell " + cell.problem->key() + "/" + cell.algorithm->key + "/rep" +
                                                  std::to_string(cell.rep) + ": " + e.what();
        }
    }

    RunResult result;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (!errors[k].empty()) {
            result.failures.push_back(errors[k]);
            log << errors[k] << '\n';
        } else {
            result.trace_files.push_back(trace_dir /
                                         trace_file_name(cells[k].problem->key(), cells[k].algorithm->key, cells[k].rep));
        }
    }
    std::size_t offset = 0;
    const std::size_t per_problem = m.algorithms.size() * m.repetitions;
    for (const auto& p : m.problems) {
        std::vector<SummaryRow> subset;
        for (std::size_t k = offset; k < offset + per_problem; ++k)
            if (errors[k].empty()) subset.push_back(rows[k]);
        offset += per_problem;
        const fs::path path = m.output_dir / summary_file_name(p.key());
        write_summary_csv(path, subset);
        result.summary_files.push_back(path);
        log << "wrote " << path.string() << " (" << subset.size() << " rows)\n";
    }
    return result;
}

// ---------------------------------------------------------------------------

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_trace_csv(const fs::path& path, const ConvergenceTrace& trace) {
    std::string out = "step,agent_id,best,mean\n";
    out.reserve(out.size() + trace.records.size() * 48);
    for (const auto& r : trace.records) {
        out += std::to_string(r.step);
        out += ',';
        out += std::to_string(r.agent);
        out += ',';
        out += format_double(r.best);
        out += ',';
        out += format_double(r.mean);
        out += '\n';
    }
    write_file(path, out);
}

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& expected_header) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path.string() + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw InputError("'" + path.string() + "': unexpected header '" + line + "' (expected '" + expected_header + "')");
    const std::size_t columns = split(expected_header, ',').size();
    std::vector<std::vector<std::string>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line, ',');
        if (fields.size() != columns)
            throw InputError("'" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                             std::to_string(columns) + " fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

std::vector<TraceRecord> read_trace_csv(const fs::path& path) {
    std::vector<TraceRecord> out;
    const std::string where = path.string();
    for (const auto& f : read_csv(path, "step,agent_id,best,mean"))
        out.push_back({parse_number<std::size_t>(f[0], where), parse_number<std::size_t>(f[1], where),
                       parse_number<double>(f[2], where), parse_number<double>(f[3], where)});
    return out;
}

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& rows) {
    std::string out = "problem,dim,algorithm,repetition,final_best,steps,seed\n";
    for (const auto& r : rows) {
        out += r.problem + ',' + std::to_string(r.dim) + ',' + r.algorithm + ',' + std::to_string(r.repetition) + ',' +
               format_double(r.final_best) + ',' + std::to_string(r.steps) + ',' + std::to_string(r.seed) + '\n';
    }
    write_file(path, out);
}

std::vector<SummaryRow> read_summary_csv(const fs::path& path) {
    std::vector<SummaryRow> out;
    const std::string where = path.string();
    for (const auto& f : read_csv(path, "problem,dim,algorithm,repetition,final_best,steps,seed"))
        out.push_back({f[0], parse_number<std::size_t>(f[1], where), f[2], parse_number<std::size_t>(f[3], where),
                       parse_number<double>(f[4], where), parse_number<std::size_t>(f[5], where),
                       parse_number<std::uint64_t>(f[6], where)});
    return out;
}

// ---------------------------------------------------------------------------

std::vector<ProblemComparison> compare_summaries(const std::vector<SummaryRow>& rows, double alpha) {
    std::vector<ProblemComparison> out;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const ProblemComparison& c) { return c.problem == r.problem && c.dim == r.dim; });
        if (it == out.end()) {
            out.push_back({r.problem, r.dim, {}, {}, {}});
            it = std::prev(out.end());
        }
        auto g = std::find_if(it->groups.begin(), it->groups.end(),
                              [&](const stats::SampleGroup& s) { return s.label == r.algorithm; });
        if (g == it->groups.end()) {
            it->groups.push_back({r.algorithm, {}});
            g = std::prev(it->groups.end());
        }
        g->values.push_back(r.final_best);
    }
    if (out.empty()) throw InputError("stats: no summary rows");
    for (auto& c : out) {
        const std::string name = c.problem + "-d" + std::to_string(c.dim);
        if (c.groups.size() < 2)
            throw InputError("stats: problem " + name + " has fewer than two algorithm groups");
        try {
            c.summaries = stats::summarize(c.groups);
            c.report = stats::dunn_holm(c.groups, alpha);
        } catch (const std::invalid_argument& e) {
            throw InputError("stats: problem " + name + ": " + e.what());
        }
    }
    return out;
}

namespace {

std::string fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (widths.size() <= c) widths.push_back(0);
            widths[c] = std::max(widths[c], r[c].size());
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t c = 0; c < r.size(); ++c) line += (c ? "  " : "") + pad(r[c], widths[c]);
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

}  // namespace

StatsFiles write_stats_reports(const std::vector<ProblemComparison>& comparisons, double alpha,
                               const std::string& baseline, const fs::path& out_dir) {
    StatsFiles files{out_dir / "stats_report.csv", out_dir / "stats_report.txt", out_dir / "table2.csv",
                     out_dir / "table2.txt",       out_dir / "table3.csv",       out_dir / "table3.txt"};
    const std::string a = format_double(alpha);

    std::string report = "problem,dim,comparison,group_a,group_b,statistic,p_raw,p_adjusted,significant\n";
    std::string text = "Kruskal-Wallis and Dunn/Holm comparisons (alpha = " + a + ")\n";
    std::string t2 = "problem,dim,algorithm,n,mean,sd\n";
    std::vector<std::vector<std::string>> t2rows = {{"problem", "algorithm", "n", "mean", "sd"}};
    std::string t3 = "problem,dim,algorithm,p_adjusted,significant\n";
    std::string t3text = "Configurations not significantly different from " + baseline + " (alpha = " + a + ")\n";

    for (const auto& c : comparisons) {
        const std::string dim = std::to_string(c.dim);
        const std::string name = c.problem + "-d" + dim;
        const auto& kw = c.report;
        const bool kw_sig = !kw.degenerate && kw.p_value < alpha;
        report += c.problem + ',' + dim + ",kruskal_wallis,all,," + format_double(kw.statistic) + ',' +
                  format_double(kw.p_value) + ',' + format_double(kw.p_value) + ',' + (kw_sig ? "1" : "0") + '\n';

        text += "\n" + name + ": H = " + fixed(kw.statistic, 6) + ", df = " + std::to_string(kw.dof) +
                ", p = " + fixed(kw.p_value, 4) + (kw.degenerate ? " (all values identical)" : "") + "\n";
        std::vector<std::vector<std::string>> rows = {{"group_a", "group_b", "z", "p_raw", "p_adj", "sig"}};
        for (const auto& p : kw.pairwise) {
            report += c.problem + ',' + dim + ",dunn_holm," + p.label_a + ',' + p.label_b + ',' + format_double(p.z) +
                      ',' + format_double(p.p_raw) + ',' + format_double(p.p_adjusted) + ',' +
                      (p.significant ? "1" : "0") + '\n';
            rows.push_back({p.label_a, p.label_b, fixed(p.z, 4), fixed(p.p_raw, 4), fixed(p.p_adjusted, 4),
                            p.significant ? "*" : ""});
        }
        for (const auto& line : split(render_table(rows), '\n'))
            if (!line.empty()) text += "  " + line + "\n";

        for (const auto& s : c.summaries) {
            t2 += c.problem + ',' + dim + ',' + s.label + ',' + std::to_string(s.count) + ',' + format_double(s.mean) +
                  ',' + format_double(s.sd) + '\n';
            t2rows.push_back({name, s.label, std::to_string(s.count), fixed(s.mean, 4), fixed(s.sd, 4)});
        }

        std::vector<std::string> similar;
        for (const auto& p : kw.pairwise) {
            if (p.label_a != baseline && p.label_b != baseline) continue;
            const std::string& other = p.label_a == baseline ? p.label_b : p.label_a;
            t3 += c.problem + ',' + dim + ',' + other + ',' + format_double(p.p_adjusted) + ',' +
                  (p.significant ? "1" : "0") + '\n';
            if (!p.significant) similar.push_back(other + " (p = " + fixed(p.p_adjusted, 3) + ")");
        }
        t3text += pad(name, 24);
        if (similar.empty()) {
            t3text += "none\n";
        } else {
            for (std::size_t k = 0; k < similar.size(); ++k) t3text += (k ? ", " : "") + similar[k];
            t3text += '\n';
        }
    }

    write_file(files.report_csv, report);
    write_file(files.report_txt, text);
    write_file(files.table2_csv, t2);
    write_file(files.table2_txt, render_table(t2rows));
    write_file(files.table3_csv, t3);
    write_file(files.table3_txt, t3text);
    return files;
}

// ---------------------------------------------------------------------------

LogScale parse_log_scale(const std::string& s) {
    if (s == "auto") return LogScale::automatic;
    if (s == "on") return LogScale::on;
    if (s == "off") return LogScale::off;
    throw InputError("--log-scale must be auto, on or off (got '" + s + "')");
}

std::string series_color(const std::string& label, std::size_t fallback_index) {
    static const std::map<std::string, std::string> palette = {
        {"strong_leadership", "#1f4fd6"}, {"exploration", "#2e8b3e"},   {"small_society", "#c0329a"},
        {"large_society", "#d62728"},     {"high_diversity", "#e0a800"}, {"island_model", "#17becf"},
    };
    static const char* extra[] = {"#555555", "#8c564b", "#7f7f7f", "#9467bd", "#bcbd22", "#000000"};
    if (auto it = palette.find(label); it != palette.end()) return it->second;
    return extra[fallback_index % std::size(extra)];
}

std::vector<std::pair<double, double>> best_so_far_curve(const std::vector<TraceRecord>& records) {
    std::map<std::size_t, double> per_step;
    for (const auto& r : records) {
        auto [it, inserted] = per_step.emplace(r.step, r.best);
        if (!inserted) it->second = std::min(it->second, r.best);
    }
    std::vector<std::pair<double, double>> out;
    double running = std::numeric_limits<double>::infinity();
    for (const auto& [step, best] : per_step) {
        running = std::min(running, best);
        out.emplace_back(static_cast<double>(step), running);
    }
    return out;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    if (v != 0.0 && (std::abs(v) >= 1e5 || std::abs(v) < 1e-3))
        std::snprintf(buf, sizeof buf, "%.0e", v);
    else
        std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (raw <= step) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return ticks;
}

constexpr std::size_t kMaxPolylinePoints = 2000;

}  // namespace

std::string render_convergence_svg(const std::string& title, const std::vector<Series>& series, LogScale scale) {
    constexpr double width = 960, height = 540;
    constexpr double left = 90, right = 210, top = 70, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    std::size_t nonempty = 0;
    for (const auto& s : series) {
        if (!s.points.empty()) ++nonempty;
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (nonempty == 0) throw InputError("plot: no data points");

    const bool all_positive = ymin > 0.0;
    const bool use_log = scale != LogScale::off && all_positive;
    std::string subtitle = use_log ? "best-so-far fitness, log scale" : "best-so-far fitness, linear scale";
    if (!all_positive && scale != LogScale::off) subtitle += " (non-positive values present)";

    auto ty = [&](double y) { return use_log ? std::log10(y) : y; };
    double ylo = ty(ymin), yhi = ty(ymax);
    if (use_log) {
        ylo = std::floor(ylo);
        yhi = std::ceil(yhi);
        if (yhi == ylo) yhi = ylo + 1.0;
    } else if (yhi == ylo) {
        ylo -= 1.0;
        yhi += 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - ylo) / (yhi - ylo)) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"960\" height=\"540\" viewBox=\"0 0 960 540\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n"
       << "<text x=\"" << num(left) << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"18\">" << escape_xml(title)
       << "</text>\n"
       << "<text x=\"" << num(left) << "\" y=\"52\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">"
       << escape_xml(subtitle) << "</text>\n"
       << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\""
       << num(plot_h) << "\" fill=\"none\" stroke=\"#000000\"/>\n";

    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double t : nice_ticks(xmin, xmax, 6)) {
        const double x = px(t);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(top + plot_h + 5) << "\" stroke=\"#000000\"/>\n"
           << "<text x=\"" << num(x) << "\" y=\"" << num(top + plot_h + 18) << "\" text-anchor=\"middle\">"
           << tick_label(t) << "</text>\n";
    }
    std::vector<double> yticks;
    if (use_log) {
        for (double e = ylo; e <= yhi + 1e-9; e += 1.0) yticks.push_back(std::pow(10.0, e));
    } else {
        yticks = nice_ticks(ylo, yhi, 6);
    }
    for (double t : yticks) {
        const double y = py(t);
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
           << num(y) << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick_label(t)
           << "</text>\n";
    }
    os << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 15)
       << "\" text-anchor=\"middle\">step</text>\n"
       << "</g>\n";

    std::size_t legend_row = 0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        if (s.points.empty()) continue;
        const std::string color = series_color(s.label, k);
        const std::size_t stride = (s.points.size() + kMaxPolylinePoints - 1) / kMaxPolylinePoints;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t p = 0; p < s.points.size(); p += stride) {
            if (p) os << ' ';
            os << num(px(s.points[p].first)) << ',' << num(py(s.points[p].second));
        }
        if ((s.points.size() - 1) % stride != 0)
            os << ' ' << num(px(s.points.back().first)) << ',' << num(py(s.points.back().second));
        os << "\"/>\n";
        const double ly = top + 10 + 20.0 * static_cast<double>(legend_row++);
        const double lx = left + plot_w + 15;
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 24) << "\" y2=\"" << num(ly)
           << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>\n"
           << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::vector<fs::path> plot_traces(const std::vector<fs::path>& trace_files, const fs::path& out_dir, LogScale scale) {
    if (trace_files.empty()) throw InputError("plot: no trace files given");
    // problem -> algorithm -> per-repetition curves, in order of first appearance
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::vector<std::vector<std::pair<double, double>>>>>>>
        problems;
    for (const auto& file : trace_files) {
        std::string stem = file.stem().string();
        std::string problem = "trace", algorithm = stem;
        if (const auto a = stem.find("__"); a != std::string::npos) {
            problem = stem.substr(0, a);
            const auto b = stem.find("__", a + 2);
            algorithm = stem.substr(a + 2, b == std::string::npos ? std::string::npos : b - a - 2);
        }
        const auto records = read_trace_csv(file);
        if (records.empty()) throw InputError("plot: '" + file.string() + "' holds no records");

        auto pit = std::find_if(problems.begin(), problems.end(), [&](const auto& p) { return p.first == problem; });
        if (pit == problems.end()) {
            problems.push_back({problem, {}});
            pit = std::prev(problems.end());
        }
        auto ait = std::find_if(pit->second.begin(), pit->second.end(), [&](const auto& a) { return a.first == algorithm; });
        if (ait == pit->second.end()) {
            pit->second.push_back({algorithm, {}});
            ait = std::prev(pit->second.end());
        }
        ait->second.push_back(best_so_far_curve(records));
    }

    std::vector<fs::path> written;
    for (const auto& [problem, algorithms] : problems) {
        std::vector<Series> series;
        for (const auto& [label, curves] : algorithms) {
            std::map<double, std::pair<double, std::size_t>> acc;
            for (const auto& c : curves)
                for (const auto& [x, y] : c) {
                    auto& slot = acc[x];
                    slot.first += y;
                    ++slot.second;
                }
            Series s{label, {}};
            for (const auto& [x, v] : acc)
                if (v.second == curves.size()) s.points.emplace_back(x, v.first / static_cast<double>(v.second));
            series.push_back(std::move(s));
        }
        const fs::path path = out_dir / ("convergence_" + problem + ".svg");
        write_file(path, render_convergence_svg("Convergence: " + problem, series, scale));
        written.push_back(path);
    }
    return written;
}

}  // namespace tbo::experiment
