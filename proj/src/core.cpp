#include "tbo/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tbo/benchmarks.hpp"

namespace tbo {

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = 0;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
}

double Rng::normal() {
    if (spare_normal_) {
        const double v = *spare_normal_;
        spare_normal_.reset();
        return v;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * m;
    return u * m;
}

double evaluate(Genome& g, const Objective& f, Rng& rng) {
    if (!g.fitness) g.fitness = f(g.genes, rng);
    return *g.fitness;
}

Population init_population(std::size_t n, const Bounds& bounds, Rng& rng) {
    Population p;
    p.capacity = n;
    p.members.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> genes(bounds.size());
        for (std::size_t d = 0; d < bounds.size(); ++d) genes[d] = rng.uniform(bounds[d].lo, bounds[d].hi);
        p.members.emplace_back(std::move(genes));
    }
    return p;
}

double mean_fitness(Population& p, const Objective& f, Rng& rng) {
    if (p.empty()) throw std::invalid_argument("mean_fitness: empty population");
    double sum = 0.0;
    for (auto& m : p.members) sum += evaluate(m, f, rng);
    return sum / static_cast<double>(p.size());
}

double best_fitness(const Population& p) { return p.members.at(best_index(p)).fitness.value(); }

std::size_t best_index(const Population& p) {
    if (p.empty()) throw std::invalid_argument("best_index: empty population");
    std::size_t best = 0;
    for (std::size_t k = 1; k < p.size(); ++k)
        if (p.members[k].fitness.value() < p.members[best].fitness.value()) best = k;
    return best;
}

std::size_t worst_index(const Population& p) {
    if (p.empty()) throw std::invalid_argument("worst_index: empty population");
    std::size_t worst = 0;
    for (std::size_t k = 1; k < p.size(); ++k)
        if (p.members[k].fitness.value() >= p.members[worst].fitness.value()) worst = k;
    return worst;
}

// ---------------------------------------------------------------------------

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

void check_agent(const AgentParams& a, const std::string& prefix, std::vector<std::string>& out) {
    if (a.population_size < 1) out.push_back(prefix + "population_size must be >= 1");
    if (!is_probability(a.crossover_rate)) out.push_back(prefix + "crossover_rate must lie in [0, 1]");
    if (!is_probability(a.mutation_rate)) out.push_back(prefix + "mutation_rate must lie in [0, 1]");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument(join_problems(problems)), problems_(std::move(problems)) {}

std::vector<std::string> config_problems(const TboConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.agent_count < 2) out.emplace_back("agent_count must be >= 2");
    if (cfg.dimension < 1) out.emplace_back("dimension must be >= 1");
    if (cfg.epoch_length < 1) out.emplace_back("epoch_length must be >= 1");
    if (cfg.max_steps < 1) out.emplace_back("max_steps must be >= 1");
    if (cfg.repetitions < 1) out.emplace_back("repetitions must be >= 1");
    if (cfg.downsample < 1) out.emplace_back("downsample must be >= 1");
    if (cfg.first_step > 1) out.emplace_back("first_step must be 0 or 1");
    if (!(cfg.diversity_factor >= 0.0)) out.emplace_back("diversity_factor must be >= 0");
    if (!(cfg.ea.sbx_eta > 0.0)) out.emplace_back("ea.sbx_eta must be > 0");
    if (!(cfg.ea.mutation_eta > 0.0)) out.emplace_back("ea.mutation_eta must be > 0");

    const auto& c = cfg.credibility;
    if (c.min_value < 1) out.emplace_back("credibility.min must be >= 1");
    if (c.max_value < c.min_value) out.emplace_back("credibility: max below min");
    if (c.start_value < c.min_value) out.emplace_back("credibility: start below min");
    if (c.start_value > c.max_value) out.emplace_back("credibility: start above max");

    if (!is_registered_objective(cfg.objective)) {
        out.push_back("objective: unknown name '" + cfg.objective + "'");
    } else {
        try {
            (void)make_objective(cfg.objective, cfg.dimension, cfg.objective_params);
        } catch (const std::exception& e) {
            out.push_back(std::string("objective: ") + e.what());
        }
    }

    if (!cfg.per_agent.empty() && cfg.per_agent.size() != cfg.agent_count)
        out.emplace_back("per_agent must be empty or hold exactly agent_count entries");
    if (cfg.per_agent.empty()) {
        check_agent(cfg.agent, "agent.", out);
    } else {
        for (std::size_t i = 0; i < cfg.per_agent.size(); ++i)
            check_agent(cfg.per_agent[i], "per_agent[" + std::to_string(i) + "].", out);
    }
    return out;
}

const TboConfig& validate_config(const TboConfig& cfg) {
    auto problems = config_problems(cfg);
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

Rates effective_rates(double base_pc, double base_pm, std::size_t agent_index, double diversity_factor) {
    const double scale = 1.0 + static_cast<double>(agent_index) * diversity_factor;
    auto clamp01 = [](double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); };
    return {clamp01(base_pc * scale), clamp01(base_pm * scale)};
}

// ---------------------------------------------------------------------------

CredibilityState::CredibilityState(const CredibilityParams& params, std::size_t agent_count)
    : params_(params), n_(agent_count) {
    check_range(params.start_value);
    const std::size_t cells = params.kind == CredibilityKind::trust ? n_ * n_ : n_;
    values_.assign(cells, params.start_value);
}

void CredibilityState::check_range(int value) const {
    if (value < params_.min_value || value > params_.max_value)
        throw std::out_of_range("credibility value " + std::to_string(value) + " outside [" +
                                std::to_string(params_.min_value) + ", " + std::to_string(params_.max_value) + "]");
}

int CredibilityState::trust(std::size_t truster, std::size_t trustee) const {
    if (params_.kind != CredibilityKind::trust) throw std::logic_error("trust read on reputation state");
    if (truster == trustee) throw std::logic_error("trust diagonal is undefined");
    return values_.at(truster * n_ + trustee);
}

void CredibilityState::set_trust(std::size_t truster, std::size_t trustee, int value) {
    if (params_.kind != CredibilityKind::trust) throw std::logic_error("trust write on reputation state");
    if (truster == trustee) throw std::logic_error("trust diagonal is undefined");
    check_range(value);
    values_.at(truster * n_ + trustee) = value;
}

int CredibilityState::reputation(std::size_t agent) const {
    if (params_.kind != CredibilityKind::reputation) throw std::logic_error("reputation read on trust state");
    return values_.at(agent);
}

void CredibilityState::set_reputation(std::size_t agent, int value) {
    if (params_.kind != CredibilityKind::reputation) throw std::logic_error("reputation write on trust state");
    check_range(value);
    values_.at(agent) = value;
}

std::vector<int> CredibilityState::stored_values() const {
    if (params_.kind == CredibilityKind::reputation) return values_;
    std::vector<int> out;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
            if (a != b) out.push_back(values_[a * n_ + b]);
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(GenomeIntensity v) {
    switch (v) {
        case GenomeIntensity::weak: return "weak";
        case GenomeIntensity::moderate: return "moderate";
        case GenomeIntensity::strong: return "strong";
    }
    return "?";
}

std::string to_string(GeneOp v) { return v == GeneOp::swap ? "swap" : "average"; }
std::string to_string(CredibilityKind v) { return v == CredibilityKind::trust ? "trust" : "reputation"; }
std::string to_string(CrossoverMode v) { return v == CrossoverMode::per_gene ? "per_gene" : "per_pair"; }
std::string to_string(PartnerPolicy v) { return v == PartnerPolicy::redraw ? "redraw" : "fixed"; }
std::string to_string(Algorithm v) { return v == Algorithm::tbo ? "tbo" : "island"; }

namespace {
[[noreturn]] void bad_enum(const char* what, const std::string& s) {
    throw std::invalid_argument(std::string("unknown ") + what + " '" + s + "'");
}
}  // namespace

GenomeIntensity parse_genome_intensity(const std::string& s) {
    if (s == "weak") return GenomeIntensity::weak;
    if (s == "moderate") return GenomeIntensity::moderate;
    if (s == "strong") return GenomeIntensity::strong;
    bad_enum("genome_intensity", s);
}

GeneOp parse_gene_op(const std::string& s) {
    if (s == "swap") return GeneOp::swap;
    if (s == "average") return GeneOp::average;
    bad_enum("gene_op", s);
}

CredibilityKind parse_credibility_kind(const std::string& s) {
    if (s == "trust") return CredibilityKind::trust;
    if (s == "reputation") return CredibilityKind::reputation;
    bad_enum("credibility kind", s);
}

CrossoverMode parse_crossover_mode(const std::string& s) {
    if (s == "per_gene") return CrossoverMode::per_gene;
    if (s == "per_pair") return CrossoverMode::per_pair;
    bad_enum("crossover_mode", s);
}

PartnerPolicy parse_partner_policy(const std::string& s) {
    if (s == "redraw") return PartnerPolicy::redraw;
    if (s == "fixed") return PartnerPolicy::fixed;
    bad_enum("partner_policy", s);
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "tbo") return Algorithm::tbo;
    if (s == "island") return Algorithm::island;
    bad_enum("algorithm", s);
}

}  // namespace tbo
