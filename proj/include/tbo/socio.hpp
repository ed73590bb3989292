#pragma once

/// @file socio.hpp
/// @brief Socio-cognitive interaction: credibility-sized sharing, the acceptance
/// threshold, divergence-driven crossover and trust/reputation updates.

#include <optional>
#include <vector>

#include "tbo/benchmarks.hpp"
#include "tbo/core.hpp"

namespace tbo {

/// Copies of the sender's members transmitted to a recipient.
struct SharedPopulation {
    std::vector<Genome> members;
    std::size_t sender = 0;
    std::size_t recipient = 0;
};

/// The min(credibility_in, |sender|) worst members of the sender, worst first.
/// Equal fitness values keep insertion order.
SharedPopulation select_shared(Population& sender_pop, const Objective& f, int credibility_in, Rng& rng);

/// Mean-fitness cutoff: 2 * mean when the mean is positive, otherwise 0.
double acceptance_threshold(double recipient_mean) noexcept;
double acceptance_threshold(Population& recipient_pop, const Objective& f, Rng& rng);

/// 0-based gene indices ordered by descending |x_i - y_i|, ascending index on ties.
std::vector<std::size_t> divergence_ranking(const Genome& y, const Genome& x);

/// Replaces (swap) or averages the k most divergent genes of y towards x.
/// Requires 1 <= k <= D. The result has no fitness cache.
Genome phi(const Genome& y, const Genome& x, std::size_t k, GeneOp op);

/// Socio-cognitive crossover of every shared genome against recipient partners.
/// weak: one offspring phi(y, x, K); moderate: K offspring phi(y, x_k, K);
/// strong: K offspring phi(y, x_k, 1); K = min(credibility_out, D).
Population sc_crossover(const Population& recipient_pop, const SharedPopulation& shared, int credibility_out,
                        const ScCrossoverConfig& cfg, Rng& rng, PartnerPolicy policy = PartnerPolicy::redraw);

struct VariationResult {
    bool accepted = false;
    Population offspring;
};

/// Rejects the share (offspring = recipient_pop) when its mean exceeds the
/// recipient's acceptance threshold, otherwise runs sc_crossover.
VariationResult sc_variation(Population& recipient_pop, SharedPopulation& shared, int credibility_out,
                             const ScCrossoverConfig& cfg, const Objective& f, Rng& rng,
                             PartnerPolicy policy = PartnerPolicy::redraw);

/// Trust the recipient places in the sender after one interaction.
int update_trust(int trust, double mean_before, double mean_after, double mean_shared, double threshold,
                 int min_value, int max_value) noexcept;

/// (recipient reputation, sender reputation) after one interaction.
std::pair<int, int> update_reputation(int recipient_rep, int sender_rep, double mean_before, double mean_after,
                                      double mean_shared, double threshold, int min_value, int max_value) noexcept;

struct CredibilityChange {
    std::size_t cell_a = 0;  ///< trust: truster; reputation: agent
    std::size_t cell_b = 0;  ///< trust: trustee; unused for reputation
    int before = 0;
    int after = 0;
};

struct InteractionOutcome {
    bool accepted = false;
    bool improved = false;
    double mean_before = 0.0;
    double mean_after = 0.0;
    double mean_shared = 0.0;
    double threshold = 0.0;
    std::size_t shared_count = 0;
    std::size_t offspring_count = 0;
    std::vector<CredibilityChange> credibility_delta;
};

/// Full interaction in place: the recipient's population and the designated
/// credibility cells are updated; the sender is only read.
InteractionOutcome interaction_step(AgentState& recipient, AgentState& sender, CredibilityState& cred,
                                    const Objective& f, Rng& rng, PartnerPolicy policy = PartnerPolicy::redraw);

}  // namespace tbo
