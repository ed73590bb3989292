#pragma once

/// @file ea.hpp
/// @brief The conventional evolutionary step: binary tournament, simulated binary
/// crossover, polynomial mutation and (mu + lambda) elitist replacement.

#include <utility>

#include "tbo/benchmarks.hpp"
#include "tbo/core.hpp"

namespace tbo {

/// Binary tournament with replacement; the lower fitness wins, ties by coin flip.
/// Returns the index of the winner. Throws on an empty population.
std::size_t tournament_select(Population& p, const Objective& f, Rng& rng);

/// Simulated binary crossover applied per gene with probability p_c
/// (or to the whole pair with probability p_c in per_pair mode).
/// Children are clamped to bounds. A child keeps its parent's fitness cache only
/// when none of its genes changed.
std::pair<Genome, Genome> sbx_crossover(const Genome& a, const Genome& b, double p_c, double eta_c,
                                        const Bounds& bounds, Rng& rng,
                                        CrossoverMode mode = CrossoverMode::per_gene);

/// Bounded polynomial mutation; each gene mutates with probability p_m.
Genome polynomial_mutation(const Genome& g, double p_m, double eta_m, const Bounds& bounds, Rng& rng);

/// Keeps the n lowest-fitness members of parents followed by offspring.
/// Sorting is stable, so ties prefer parents and then insertion order.
/// Throws when the union holds fewer than n genomes.
Population replace_mu_plus_lambda(Population parents, Population offspring, std::size_t n, const Objective& f,
                                  Rng& rng);

/// One generation of the agent's EA, in place.
void ea_step(AgentState& agent, const Objective& f, const EaParams& params, Rng& rng);

}  // namespace tbo
