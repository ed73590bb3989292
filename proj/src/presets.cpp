#include "tbo/presets.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace tbo {

using nlohmann::json;

namespace {

json agent_to_json(const AgentParams& a) {
    json j = {
        {"population_size", a.population_size},
        {"offspring_size", a.offspring_size},
        {"crossover_rate", a.crossover_rate},
        {"mutation_rate", a.mutation_rate},
        {"genome_intensity", to_string(a.crossover.genome_intensity)},
        {"gene_op", to_string(a.crossover.gene_op)},
    };
    if (a.epoch_length != 0) j["epoch_length"] = a.epoch_length;
    return j;
}

// Reads an object field by field, rejecting keys nobody consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            fail(path_ + "." + key, e.what());
        }
    }

    void get_size(const char* key, std::size_t& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) fail(path_ + "." + key, "expected a nonnegative integer");
        out = v.get<std::size_t>();
    }

    template <typename E>
    void get_enum(const char* key, E& out, E (*parse)(const std::string&)) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        const auto& v = j_.at(key);
        if (!v.is_string()) fail(path_ + "." + key, "expected a string");
        try {
            out = parse(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(path_ + "." + key, e.what());
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    std::string path(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(path_ + "." + k, "unknown field");
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& what) {
        throw std::invalid_argument(path + ": " + what);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

AgentParams agent_from_json(const json& j, const std::string& path, AgentParams a) {
    Reader r(j, path);
    r.get_size("population_size", a.population_size);
    r.get_size("offspring_size", a.offspring_size);
    r.get("crossover_rate", a.crossover_rate);
    r.get("mutation_rate", a.mutation_rate);
    r.get_enum("genome_intensity", a.crossover.genome_intensity, &parse_genome_intensity);
    r.get_enum("gene_op", a.crossover.gene_op, &parse_gene_op);
    r.get_size("epoch_length", a.epoch_length);
    r.finish();
    return a;
}

}  // namespace

json config_to_json(const TboConfig& cfg) {
    json j = {
        {"name", cfg.name},
        {"algorithm", to_string(cfg.algorithm)},
        {"agent_count", cfg.agent_count},
        {"epoch_length", cfg.epoch_length},
        {"diversity_factor", cfg.diversity_factor},
        {"credibility",
         {{"kind", to_string(cfg.credibility.kind)},
          {"start", cfg.credibility.start_value},
          {"min", cfg.credibility.min_value},
          {"max", cfg.credibility.max_value}}},
        {"agent", agent_to_json(cfg.agent)},
        {"ea",
         {{"sbx_eta", cfg.ea.sbx_eta},
          {"mutation_eta", cfg.ea.mutation_eta},
          {"crossover_mode", to_string(cfg.ea.crossover_mode)}}},
        {"partner_policy", to_string(cfg.partner_policy)},
        {"first_step", cfg.first_step},
        {"objective", cfg.objective},
        {"dimension", cfg.dimension},
        {"objective_params",
         {{"noise_sigma", cfg.objective_params.noise_sigma},
          {"lj_a", cfg.objective_params.lj_a},
          {"lj_b", cfg.objective_params.lj_b}}},
        {"max_steps", cfg.max_steps},
        {"seed", cfg.seed},
        {"repetitions", cfg.repetitions},
        {"downsample", cfg.downsample},
        {"record_snapshots", cfg.record_snapshots},
    };
    if (!cfg.per_agent.empty()) {
        json arr = json::array();
        for (const auto& a : cfg.per_agent) arr.push_back(agent_to_json(a));
        j["per_agent"] = arr;
    }
    return j;
}

TboConfig config_from_json(const json& j) {
    TboConfig cfg;
    Reader r(j, "config");
    r.get("name", cfg.name);
    r.get_enum("algorithm", cfg.algorithm, &parse_algorithm);
    r.get_size("agent_count", cfg.agent_count);
    r.get_size("epoch_length", cfg.epoch_length);
    r.get("diversity_factor", cfg.diversity_factor);
    if (const json* c = r.child("credibility")) {
        Reader cr(*c, r.path("credibility"));
        cr.get_enum("kind", cfg.credibility.kind, &parse_credibility_kind);
        cr.get("start", cfg.credibility.start_value);
        cr.get("min", cfg.credibility.min_value);
        cr.get("max", cfg.credibility.max_value);
        cr.finish();
    }
    if (const json* a = r.child("agent")) cfg.agent = agent_from_json(*a, r.path("agent"), cfg.agent);
    if (const json* e = r.child("ea")) {
        Reader er(*e, r.path("ea"));
        er.get("sbx_eta", cfg.ea.sbx_eta);
        er.get("mutation_eta", cfg.ea.mutation_eta);
        er.get_enum("crossover_mode", cfg.ea.crossover_mode, &parse_crossover_mode);
        er.finish();
    }
    r.get_enum("partner_policy", cfg.partner_policy, &parse_partner_policy);
    r.get_size("first_step", cfg.first_step);
    r.get("objective", cfg.objective);
    r.get_size("dimension", cfg.dimension);
    if (const json* o = r.child("objective_params")) {
        Reader orr(*o, r.path("objective_params"));
        orr.get("noise_sigma", cfg.objective_params.noise_sigma);
        orr.get("lj_a", cfg.objective_params.lj_a);
        orr.get("lj_b", cfg.objective_params.lj_b);
        orr.finish();
    }
    r.get_size("max_steps", cfg.max_steps);
    r.get("seed", cfg.seed);
    r.get_size("repetitions", cfg.repetitions);
    r.get_size("downsample", cfg.downsample);
    r.get("record_snapshots", cfg.record_snapshots);
    if (const json* pa = r.child("per_agent")) {
        if (!pa->is_array()) Reader::fail(r.path("per_agent"), "expected an array");
        for (std::size_t i = 0; i < pa->size(); ++i)
            cfg.per_agent.push_back(
                agent_from_json((*pa)[i], r.path("per_agent") + "[" + std::to_string(i) + "]", cfg.agent));
    }
    r.finish();
    return cfg;
}

// ---------------------------------------------------------------------------

namespace {

TboConfig tbo_preset(const char* name, std::size_t n, std::size_t tau, CredibilityKind kind, int start,
                     GenomeIntensity intensity, GeneOp op, double df) {
    TboConfig c;
    c.name = name;
    c.algorithm = Algorithm::tbo;
    c.agent_count = n;
    c.epoch_length = tau;
    c.diversity_factor = df;
    c.credibility = {kind, start, 1, 50};
    c.agent.crossover = {intensity, op};
    c.objective = "sphere";
    c.dimension = 50;
    c.max_steps = 5000;
    c.repetitions = 8;
    return c;
}

}  // namespace

const std::vector<Preset>& builtin_presets() {
    using CK = CredibilityKind;
    using GI = GenomeIntensity;
    static const std::vector<Preset> presets = [] {
        std::vector<Preset> v;
        auto add = [&](TboConfig c) { v.push_back({slugify(c.name), std::move(c)}); };
        add(tbo_preset("Strong leadership", 10, 25, CK::reputation, 50, GI::moderate, GeneOp::swap, 1.3));
        add(tbo_preset("Exploration", 10, 25, CK::trust, 25, GI::strong, GeneOp::average, 1.3));
        add(tbo_preset("Small society", 5, 25, CK::trust, 5, GI::strong, GeneOp::swap, 1.3));
        add(tbo_preset("Large society", 20, 50, CK::reputation, 30, GI::weak, GeneOp::swap, 1.3));
        add(tbo_preset("High diversity", 10, 25, CK::reputation, 40, GI::moderate, GeneOp::swap, 2.0));

        TboConfig im = tbo_preset("Island model", 10, 25, CK::trust, 5, GI::weak, GeneOp::swap, 1.3);
        im.algorithm = Algorithm::island;
        add(std::move(im));
        return v;
    }();
    return presets;
}

std::string slugify(const std::string& name) {
    std::string out;
    for (char ch : name) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c))
            out.push_back(static_cast<char>(std::tolower(c)));
        else if (!out.empty() && out.back() != '_')
            out.push_back('_');
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

std::optional<Preset> find_preset(const std::string& name) {
    const std::string slug = slugify(name);
    for (const auto& p : builtin_presets())
        if (p.key == slug) return p;
    return std::nullopt;
}

}  // namespace tbo
