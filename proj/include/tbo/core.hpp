#pragma once

/// @file core.hpp
/// @brief Domain types, configuration validation and the seeded randomness policy
/// shared by every other part of the library.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <random>

namespace tbo {

class Objective;

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream index.
///
/// Seeds form a tree: root -> repetition -> agent. Each (repetition, agent)
/// pair therefore owns a stream that does not depend on scheduling order.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(parent ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Seeded pseudo-random stream.
///
/// Wraps std::mt19937_64 with distribution code written out explicitly so that
/// streams are bit-identical across standard library implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi]; returns lo when the interval is degenerate.
    double uniform(double lo, double hi) {
        if (!(hi > lo)) return lo;
        const double v = lo + (hi - lo) * uniform01();
        return v > hi ? hi : v;
    }

    /// Uniform integer on [0, n). Requires n > 0.
    std::size_t index(std::size_t n);

    bool coin() { return (engine_() >> 63) != 0; }

    /// Standard normal via the Marsaglia polar method.
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

// ---------------------------------------------------------------------------
// Genomes and populations
// ---------------------------------------------------------------------------

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double clamp(double v) const noexcept { return v < lo ? lo : (v > hi ? hi : v); }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

using Bounds = std::vector<Interval>;

/// Real-valued candidate solution with a lazily evaluated fitness cache.
struct Genome {
    std::vector<double> genes;
    std::optional<double> fitness;

    Genome() = default;
    explicit Genome(std::vector<double> g) : genes(std::move(g)) {}

    [[nodiscard]] std::size_t size() const noexcept { return genes.size(); }
    void invalidate() noexcept { fitness.reset(); }

    friend bool operator==(const Genome&, const Genome&) = default;
};

/// Fitness of a genome, evaluating and caching when unset.
double evaluate(Genome& g, const Objective& f, Rng& rng);

struct Population {
    std::vector<Genome> members;
    std::size_t capacity = 0;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    [[nodiscard]] bool empty() const noexcept { return members.empty(); }

    void invalidate_all() noexcept {
        for (auto& m : members) m.invalidate();
    }

    friend bool operator==(const Population&, const Population&) = default;
};

/// Samples n genomes uniformly inside the given box. Caches are unset.
Population init_population(std::size_t n, const Bounds& bounds, Rng& rng);

/// Arithmetic mean of the objective over the population; evaluates missing caches.
/// Throws std::invalid_argument on an empty population.
double mean_fitness(Population& p, const Objective& f, Rng& rng);

/// Lowest cached fitness; every member must already be evaluated.
double best_fitness(const Population& p);

/// Index of the member with the lowest cached fitness (first on ties).
std::size_t best_index(const Population& p);

/// Index of the member with the highest cached fitness (last on ties).
std::size_t worst_index(const Population& p);

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class GenomeIntensity { weak, moderate, strong };
enum class GeneOp { swap, average };
enum class CredibilityKind { trust, reputation };
enum class CrossoverMode { per_gene, per_pair };
enum class PartnerPolicy { redraw, fixed };
enum class Algorithm { tbo, island };

struct ScCrossoverConfig {
    GenomeIntensity genome_intensity = GenomeIntensity::weak;
    GeneOp gene_op = GeneOp::swap;
    friend bool operator==(const ScCrossoverConfig&, const ScCrossoverConfig&) = default;
};

/// Per-agent parameters; the EA constants default to the published operator suite.
struct AgentParams {
    std::size_t population_size = 5;
    std::size_t offspring_size = 15;
    double crossover_rate = 0.005;
    double mutation_rate = 0.0005;
    ScCrossoverConfig crossover;
    /// 0 means "use the shared epoch length".
    std::size_t epoch_length = 0;
    friend bool operator==(const AgentParams&, const AgentParams&) = default;
};

struct CredibilityParams {
    CredibilityKind kind = CredibilityKind::trust;
    int start_value = 5;
    int min_value = 1;
    int max_value = 50;
    friend bool operator==(const CredibilityParams&, const CredibilityParams&) = default;
};

struct EaParams {
    double sbx_eta = 20.0;
    double mutation_eta = 40.0;
    CrossoverMode crossover_mode = CrossoverMode::per_gene;
    friend bool operator==(const EaParams&, const EaParams&) = default;
};

struct ObjectiveParams {
    /// Negative means "use the default 0.01 * D".
    double noise_sigma = -1.0;
    double lj_a = 1.0;
    double lj_b = 2.0;
    friend bool operator==(const ObjectiveParams&, const ObjectiveParams&) = default;
};

struct TboConfig {
    std::string name = "custom";
    Algorithm algorithm = Algorithm::tbo;
    std::size_t agent_count = 2;
    std::size_t dimension = 10;
    std::string objective = "sphere";
    ObjectiveParams objective_params;
    std::size_t epoch_length = 25;
    double diversity_factor = 0.0;
    CredibilityParams credibility;
    EaParams ea;
    PartnerPolicy partner_policy = PartnerPolicy::redraw;
    /// Template applied to every agent unless per_agent is non-empty.
    AgentParams agent;
    /// Optional heterogeneous overrides; when non-empty its size must equal agent_count.
    std::vector<AgentParams> per_agent;
    std::size_t max_steps = 1000;
    std::uint64_t seed = 1;
    std::size_t repetitions = 1;
    /// Global clock origin (0 or 1).
    std::size_t first_step = 1;
    /// Record every k-th step in the trace (the final step is always recorded).
    std::size_t downsample = 1;
    /// Keep full-population snapshots at epoch boundaries.
    bool record_snapshots = false;

    [[nodiscard]] const AgentParams& params_for(std::size_t agent) const {
        return per_agent.empty() ? this->agent : per_agent.at(agent);
    }
    [[nodiscard]] std::size_t epoch_for(std::size_t agent) const {
        const auto e = params_for(agent).epoch_length;
        return e == 0 ? epoch_length : e;
    }

    friend bool operator==(const TboConfig&, const TboConfig&) = default;
};

/// Aggregated validation failure; what() lists every violated constraint.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Every violated constraint of cfg, empty when valid.
std::vector<std::string> config_problems(const TboConfig& cfg);

/// Returns cfg unchanged or throws ConfigError naming each offending field.
const TboConfig& validate_config(const TboConfig& cfg);

struct Rates {
    double crossover = 0.0;
    double mutation = 0.0;
};

/// Diversity amplification: base * (1 + index * d_f), clamped into [0, 1].
Rates effective_rates(double base_pc, double base_pm, std::size_t agent_index, double diversity_factor);

// ---------------------------------------------------------------------------
// Agent and credibility state
// ---------------------------------------------------------------------------

struct AgentState {
    std::size_t id = 0;
    Population population;
    std::size_t offspring_size = 0;
    double base_crossover_rate = 0.0;
    double base_mutation_rate = 0.0;
    double crossover_rate = 0.0;
    double mutation_rate = 0.0;
    ScCrossoverConfig crossover;
};

/// Trust matrix or reputation vector with clamping bounds.
///
/// trust(a, b) is the trust agent a places in agent b. The diagonal is never read.
class CredibilityState {
public:
    CredibilityState() = default;
    CredibilityState(const CredibilityParams& params, std::size_t agent_count);

    [[nodiscard]] CredibilityKind kind() const noexcept { return params_.kind; }
    [[nodiscard]] const CredibilityParams& params() const noexcept { return params_; }
    [[nodiscard]] std::size_t agent_count() const noexcept { return n_; }

    [[nodiscard]] int trust(std::size_t truster, std::size_t trustee) const;
    void set_trust(std::size_t truster, std::size_t trustee, int value);

    [[nodiscard]] int reputation(std::size_t agent) const;
    void set_reputation(std::size_t agent, int value);

    /// Every stored value, for bound checks. The trust diagonal is excluded.
    [[nodiscard]] std::vector<int> stored_values() const;

    friend bool operator==(const CredibilityState&, const CredibilityState&) = default;

private:
    void check_range(int value) const;

    CredibilityParams params_;
    std::size_t n_ = 0;
    std::vector<int> values_;
};

// ---------------------------------------------------------------------------
// Trace
// ---------------------------------------------------------------------------

struct TraceRecord {
    std::size_t step = 0;
    std::size_t agent = 0;
    double best = 0.0;
    double mean = 0.0;
    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Snapshot {
    std::size_t step = 0;
    std::size_t agent = 0;
    std::vector<std::vector<double>> genes;
    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct GlobalBest {
    std::size_t step = 0;
    Genome genome;
    double fitness = 0.0;
    friend bool operator==(const GlobalBest&, const GlobalBest&) = default;
};

struct ConvergenceTrace {
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    std::vector<TraceRecord> records;
    /// Best-so-far fitness after each recorded step, one entry per distinct recorded step.
    std::vector<std::pair<std::size_t, double>> best_so_far;
    std::vector<Snapshot> snapshots;
    GlobalBest global_best;
    std::size_t interactions = 0;
    std::size_t accepted = 0;
    std::size_t improved = 0;

    friend bool operator==(const ConvergenceTrace&, const ConvergenceTrace&) = default;
};

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

std::string to_string(GenomeIntensity v);
std::string to_string(GeneOp v);
std::string to_string(CredibilityKind v);
std::string to_string(CrossoverMode v);
std::string to_string(PartnerPolicy v);
std::string to_string(Algorithm v);

GenomeIntensity parse_genome_intensity(const std::string& s);
GeneOp parse_gene_op(const std::string& s);
CredibilityKind parse_credibility_kind(const std::string& s);
CrossoverMode parse_crossover_mode(const std::string& s);
PartnerPolicy parse_partner_policy(const std::string& s);
Algorithm parse_algorithm(const std::string& s);

}  // namespace tbo
