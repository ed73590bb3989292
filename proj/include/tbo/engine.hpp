#pragma once

/// @file engine.hpp
/// @brief Global clock for the trust-based optimizer and the baseline island model.
///
/// Each global step t dispatches every agent to either an EA generation
/// (t mod tau != 0) or an exchange (t mod tau == 0): a socio-cognitive
/// interaction for the trust-based optimizer, an elitist migration for the
/// island model. EA generations of distinct agents are independent and may run
/// in parallel; exchanges are applied sequentially in agent-index order.
/// Both execution policies produce bit-identical traces.

#include <cstdint>
#include <optional>
#include <vector>

#include "tbo/benchmarks.hpp"
#include "tbo/core.hpp"
#include "tbo/socio.hpp"

namespace tbo {

enum class ExecPolicy { serial, parallel };

struct MigrationEvent {
    std::size_t recipient = 0;
    std::size_t sender = 0;
    double migrant_fitness = 0.0;
    double replaced_fitness = 0.0;
};

struct RunState {
    TboConfig cfg;
    Objective objective;
    std::size_t step = 0;
    std::vector<AgentState> agents;
    CredibilityState credibility;
    std::vector<Rng> rngs;
    ConvergenceTrace trace;

    /// Exchanges performed during the most recent global step.
    std::vector<InteractionOutcome> last_interactions;
    std::vector<MigrationEvent> last_migrations;
    /// Branch taken per agent in the most recent step (true = exchange).
    std::vector<bool> last_exchanged;
};

/// Seed of repetition r under the given root seed.
std::uint64_t repetition_seed(std::uint64_t root, std::size_t repetition) noexcept;
/// Stream seed of one agent within a run.
std::uint64_t agent_seed(std::uint64_t run_seed, std::size_t agent) noexcept;

/// Initial populations, effective rates and credibility for one repetition.
/// agent_seeds, when given, overrides the derived per-agent stream seeds.
RunState init_run(const TboConfig& cfg, std::size_t repetition = 0,
                  const std::vector<std::uint64_t>& agent_seeds = {});

/// True when the agent exchanges (rather than evolves) at the state's current step.
bool exchanges_at(const RunState& state, std::size_t agent_index);

/// Applies the EA or exchange branch for one agent at the current step.
void step_dispatch(RunState& state, std::size_t agent_index);

/// Advances every agent by one global step and appends trace records.
void global_step(RunState& state, ExecPolicy policy = ExecPolicy::serial);

/// Runs cfg.algorithm for max_steps global steps.
ConvergenceTrace run_single(const TboConfig& cfg, std::size_t repetition = 0, ExecPolicy policy = ExecPolicy::serial);

ConvergenceTrace tbo_run(TboConfig cfg, std::size_t repetition = 0, ExecPolicy policy = ExecPolicy::serial);
ConvergenceTrace island_model_run(TboConfig cfg, std::size_t repetition = 0, ExecPolicy policy = ExecPolicy::serial);

/// Independent repetitions with derived seeds. The parallel policy spreads
/// repetitions over threads; each repetition then runs its agents serially.
std::vector<ConvergenceTrace> run_repetitions(TboConfig cfg, Algorithm algorithm,
                                              ExecPolicy policy = ExecPolicy::serial);

}  // namespace tbo
