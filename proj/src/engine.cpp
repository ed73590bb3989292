#include "tbo/engine.hpp"

#include <exception>
#include <limits>
#include <stdexcept>

#include "tbo/ea.hpp"

#ifdef TBO_HAVE_OPENMP
#include <omp.h>
#endif

namespace tbo {

std::uint64_t repetition_seed(std::uint64_t root, std::size_t repetition) noexcept {
    return derive_seed(root, repetition);
}

std::uint64_t agent_seed(std::uint64_t run_seed, std::size_t agent) noexcept { return derive_seed(run_seed, agent); }

RunState init_run(const TboConfig& cfg, std::size_t repetition, const std::vector<std::uint64_t>& agent_seeds) {
    validate_config(cfg);
    if (!agent_seeds.empty() && agent_seeds.size() != cfg.agent_count)
        throw std::invalid_argument("init_run: agent_seeds must hold one seed per agent");

    RunState state{.cfg = cfg,
                   .objective = make_objective(cfg.objective, cfg.dimension, cfg.objective_params),
                   .step = 0,
                   .agents = {},
                   .credibility = {},
                   .rngs = {},
                   .trace = {},
                   .last_interactions = {},
                   .last_migrations = {},
                   .last_exchanged = {}};
    state.step = cfg.first_step;
    state.trace.repetition = repetition;
    state.trace.seed = repetition_seed(cfg.seed, repetition);
    state.trace.global_best.fitness = std::numeric_limits<double>::infinity();

    const std::size_t n = cfg.agent_count;
    state.rngs.reserve(n);
    state.agents.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        state.rngs.emplace_back(agent_seeds.empty() ? agent_seed(state.trace.seed, i) : agent_seeds[i]);
        const auto& p = cfg.params_for(i);
        auto& a = state.agents[i];
        a.id = i;
        a.population = init_population(p.population_size, state.objective.bounds(), state.rngs[i]);
        a.offspring_size = p.offspring_size;
        a.base_crossover_rate = p.crossover_rate;
        a.base_mutation_rate = p.mutation_rate;
        const Rates r = effective_rates(p.crossover_rate, p.mutation_rate, i, cfg.diversity_factor);
        a.crossover_rate = r.crossover;
        a.mutation_rate = r.mutation;
        a.crossover = p.crossover;
        for (auto& m : a.population.members) evaluate(m, state.objective, state.rngs[i]);
    }
    if (cfg.algorithm == Algorithm::tbo) state.credibility = CredibilityState(cfg.credibility, n);
    state.last_exchanged.assign(n, false);
    return state;
}

bool exchanges_at(const RunState& state, std::size_t agent_index) {
    return state.step % state.cfg.epoch_for(agent_index) == 0;
}

namespace {

std::size_t draw_sender(std::size_t recipient, std::size_t n, Rng& rng) {
    const std::size_t k = rng.index(n - 1);
    return k >= recipient ? k + 1 : k;
}

void migrate(RunState& state, std::size_t i) {
    auto& rng = state.rngs[i];
    const std::size_t j = draw_sender(i, state.agents.size(), rng);
    auto& sender = state.agents[j].population;
    auto& recipient = state.agents[i].population;
    for (auto& m : sender.members) evaluate(m, state.objective, rng);
    for (auto& m : recipient.members) evaluate(m, state.objective, rng);

    Genome migrant = sender.members[best_index(sender)];
    const std::size_t w = worst_index(recipient);
    state.last_migrations.push_back({i, j, *migrant.fitness, *recipient.members[w].fitness});
    recipient.members[w] = std::move(migrant);
}

void interact(RunState& state, std::size_t i) {
    auto& rng = state.rngs[i];
    const std::size_t j = draw_sender(i, state.agents.size(), rng);
    state.last_interactions.push_back(interaction_step(state.agents[i], state.agents[j], state.credibility,
                                                       state.objective, rng, state.cfg.partner_policy));
    auto& tr = state.trace;
    ++tr.interactions;
    if (state.last_interactions.back().accepted) ++tr.accepted;
    if (state.last_interactions.back().improved) ++tr.improved;
}

void record(RunState& state) {
    const auto& cfg = state.cfg;
    auto& tr = state.trace;
    const std::size_t done = state.step - cfg.first_step + 1;
    const bool last = done == cfg.max_steps;
    const bool keep = last || done % cfg.downsample == 0;

    for (std::size_t i = 0; i < state.agents.size(); ++i) {
        auto& pop = state.agents[i].population;
        double sum = 0.0;
        for (auto& m : pop.members) sum += evaluate(m, state.objective, state.rngs[i]);
        const std::size_t b = best_index(pop);
        const double best = *pop.members[b].fitness;
        if (best < tr.global_best.fitness) tr.global_best = {state.step, pop.members[b], best};
        if (keep) tr.records.push_back({state.step, i, best, sum / static_cast<double>(pop.size())});
    }
    if (keep) tr.best_so_far.emplace_back(state.step, tr.global_best.fitness);

    if (cfg.record_snapshots && state.step % cfg.epoch_length == 0) {
        for (std::size_t i = 0; i < state.agents.size(); ++i) {
            Snapshot s{state.step, i, {}};
            for (const auto& m : state.agents[i].population.members) s.genes.push_back(m.genes);
            tr.snapshots.push_back(std::move(s));
        }
    }
}

}  // namespace

void step_dispatch(RunState& state, std::size_t agent_index) {
    if (!exchanges_at(state, agent_index)) {
        ea_step(state.agents[agent_index], state.objective, state.cfg.ea, state.rngs[agent_index]);
        return;
    }
    if (state.cfg.algorithm == Algorithm::tbo)
        interact(state, agent_index);
    else
        migrate(state, agent_index);
}

void global_step(RunState& state, ExecPolicy policy) {
    const std::size_t n = state.agents.size();
    state.last_interactions.clear();
    state.last_migrations.clear();
    if (state.objective.noisy())
        for (auto& a : state.agents) a.population.invalidate_all();

    std::vector<std::size_t> evolving;
    std::vector<std::size_t> exchanging;
    for (std::size_t i = 0; i < n; ++i) {
        state.last_exchanged[i] = exchanges_at(state, i);
        (state.last_exchanged[i] ? exchanging : evolving).push_back(i);
    }

    // EA generations touch only their own agent and stream.
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(evolving.size());
#ifdef TBO_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (policy == ExecPolicy::parallel && count > 1)
#endif
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            step_dispatch(state, evolving[static_cast<std::size_t>(k)]);
        } catch (...) {
#ifdef TBO_HAVE_OPENMP
#pragma omp critical(tbo_engine_failure)
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    (void)policy;

    for (std::size_t i : exchanging) step_dispatch(state, i);

    record(state);
    ++state.step;
}

ConvergenceTrace run_single(const TboConfig& cfg, std::size_t repetition, ExecPolicy policy) {
    RunState state = init_run(cfg, repetition);
    for (std::size_t s = 0; s < cfg.max_steps; ++s) global_step(state, policy);
    return std::move(state.trace);
}

ConvergenceTrace tbo_run(TboConfig cfg, std::size_t repetition, ExecPolicy policy) {
    cfg.algorithm = Algorithm::tbo;
    return run_single(cfg, repetition, policy);
}

ConvergenceTrace island_model_run(TboConfig cfg, std::size_t repetition, ExecPolicy policy) {
    cfg.algorithm = Algorithm::island;
    return run_single(cfg, repetition, policy);
}

std::vector<ConvergenceTrace> run_repetitions(TboConfig cfg, Algorithm algorithm, ExecPolicy policy) {
    validate_config(cfg);
    cfg.algorithm = algorithm;
    std::vector<ConvergenceTrace> out(cfg.repetitions);
    std::exception_ptr failure;
    const auto reps = static_cast<std::ptrdiff_t>(cfg.repetitions);
#ifdef TBO_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (policy == ExecPolicy::parallel && reps > 1)
#endif
    for (std::ptrdiff_t r = 0; r < reps; ++r) {
        try {
            out[static_cast<std::size_t>(r)] = run_single(cfg, static_cast<std::size_t>(r), ExecPolicy::serial);
        } catch (...) {
#ifdef TBO_HAVE_OPENMP
#pragma omp critical(tbo_engine_failure)
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    (void)policy;
    return out;
}

}  // namespace tbo
