#include "tbo/socio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tbo/ea.hpp"

namespace tbo {

SharedPopulation select_shared(Population& sender_pop, const Objective& f, int credibility_in, Rng& rng) {
    if (sender_pop.empty()) throw std::invalid_argument("select_shared: empty sender population");
    if (credibility_in < 1) throw std::invalid_argument("select_shared: credibility must be >= 1");
    for (auto& m : sender_pop.members) evaluate(m, f, rng);

    std::vector<std::size_t> order(sender_pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *sender_pop.members[a].fitness > *sender_pop.members[b].fitness;
    });

    const std::size_t m = std::min(static_cast<std::size_t>(credibility_in), sender_pop.size());
    SharedPopulation shared;
    shared.members.reserve(m);
    for (std::size_t k = 0; k < m; ++k) shared.members.push_back(sender_pop.members[order[k]]);
    return shared;
}

double acceptance_threshold(double recipient_mean) noexcept { return recipient_mean > 0.0 ? 2.0 * recipient_mean : 0.0; }

double acceptance_threshold(Population& recipient_pop, const Objective& f, Rng& rng) {
    return acceptance_threshold(mean_fitness(recipient_pop, f, rng));
}

std::vector<std::size_t> divergence_ranking(const Genome& y, const Genome& x) {
    if (y.size() != x.size()) throw std::invalid_argument("divergence_ranking: length mismatch");
    std::vector<double> diff(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) diff[i] = std::abs(x.genes[i] - y.genes[i]);
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return diff[a] > diff[b]; });
    return order;
}

Genome phi(const Genome& y, const Genome& x, std::size_t k, GeneOp op) {
    if (k < 1 || k > y.size()) throw std::invalid_argument("phi: k must lie in [1, D]");
    const auto order = divergence_ranking(y, x);
    Genome out(y.genes);
    for (std::size_t r = 0; r < k; ++r) {
        const std::size_t i = order[r];
        out.genes[i] = op == GeneOp::swap ? x.genes[i] : (y.genes[i] + x.genes[i]) / 2.0;
    }
    return out;
}

Population sc_crossover(const Population& recipient_pop, const SharedPopulation& shared, int credibility_out,
                        const ScCrossoverConfig& cfg, Rng& rng, PartnerPolicy policy) {
    if (recipient_pop.empty()) throw std::invalid_argument("sc_crossover: empty recipient population");
    Population out;
    if (shared.members.empty()) return out;
    const std::size_t dim = shared.members.front().size();
    if (credibility_out < 1) throw std::invalid_argument("sc_crossover: credibility must be >= 1");
    const std::size_t big_k = std::min(static_cast<std::size_t>(credibility_out), dim);

    const std::size_t per_share = cfg.genome_intensity == GenomeIntensity::weak ? 1 : big_k;
    const std::size_t genes_changed = cfg.genome_intensity == GenomeIntensity::strong ? 1 : big_k;
    out.members.reserve(shared.members.size() * per_share);
    for (const auto& y : shared.members) {
        const Genome* partner = &recipient_pop.members[rng.index(recipient_pop.size())];
        for (std::size_t k = 0; k < per_share; ++k) {
            if (k > 0 && policy == PartnerPolicy::redraw)
                partner = &recipient_pop.members[rng.index(recipient_pop.size())];
            out.members.push_back(phi(y, *partner, genes_changed, cfg.gene_op));
        }
    }
    out.capacity = out.members.size();
    return out;
}

VariationResult sc_variation(Population& recipient_pop, SharedPopulation& shared, int credibility_out,
                             const ScCrossoverConfig& cfg, const Objective& f, Rng& rng, PartnerPolicy policy) {
    if (shared.members.empty()) throw std::invalid_argument("sc_variation: empty shared population");
    const double threshold = acceptance_threshold(recipient_pop, f, rng);
    double sum = 0.0;
    for (auto& g : shared.members) sum += evaluate(g, f, rng);
    const double mean_shared = sum / static_cast<double>(shared.members.size());
    if (mean_shared > threshold) return {false, recipient_pop};
    return {true, sc_crossover(recipient_pop, shared, credibility_out, cfg, rng, policy)};
}

int update_trust(int trust, double mean_before, double mean_after, double mean_shared, double threshold,
                 int min_value, int max_value) noexcept {
    if (mean_after < mean_before) return std::min(max_value, trust + 1);
    if (mean_shared > threshold) return std::max(min_value, trust - 1);
    return trust;
}

std::pair<int, int> update_reputation(int recipient_rep, int sender_rep, double mean_before, double mean_after,
                                      double mean_shared, double threshold, int min_value, int max_value) noexcept {
    if (mean_after < mean_before) return {std::max(min_value, recipient_rep - 1), std::min(max_value, sender_rep + 1)};
    if (mean_shared > threshold) return {std::min(max_value, recipient_rep + 1), std::max(min_value, sender_rep - 1)};
    return {recipient_rep, sender_rep};
}

InteractionOutcome interaction_step(AgentState& recipient, AgentState& sender, CredibilityState& cred,
                                    const Objective& f, Rng& rng, PartnerPolicy policy) {
    if (recipient.id == sender.id) throw std::invalid_argument("interaction_step: recipient and sender coincide");
    const std::size_t i = recipient.id;
    const std::size_t j = sender.id;
    const bool trust_mode = cred.kind() == CredibilityKind::trust;

    // Share size follows the sender's trust in the recipient (or the recipient's
    // reputation); variation strength follows the recipient's trust in the sender
    // (or the sender's reputation).
    const int credibility_in = trust_mode ? cred.trust(j, i) : cred.reputation(i);
    const int credibility_out = trust_mode ? cred.trust(i, j) : cred.reputation(j);

    InteractionOutcome out;
    out.mean_before = mean_fitness(recipient.population, f, rng);
    out.threshold = acceptance_threshold(out.mean_before);

    SharedPopulation shared = select_shared(sender.population, f, credibility_in, rng);
    shared.sender = j;
    shared.recipient = i;
    out.shared_count = shared.members.size();

    auto variation = sc_variation(recipient.population, shared, credibility_out, recipient.crossover, f, rng, policy);
    double sum = 0.0;
    for (const auto& g : shared.members) sum += *g.fitness;
    out.mean_shared = sum / static_cast<double>(shared.members.size());
    out.accepted = variation.accepted;

    if (out.accepted) {
        out.offspring_count = variation.offspring.size();
        const std::size_t n = recipient.population.capacity;
        recipient.population =
            replace_mu_plus_lambda(std::move(recipient.population), std::move(variation.offspring), n, f, rng);
        out.mean_after = mean_fitness(recipient.population, f, rng);
    } else {
        out.mean_after = out.mean_before;
    }
    out.improved = out.mean_after < out.mean_before;

    const auto& p = cred.params();
    if (trust_mode) {
        const int before = cred.trust(i, j);
        const int after =
            update_trust(before, out.mean_before, out.mean_after, out.mean_shared, out.threshold, p.min_value, p.max_value);
        if (after != before) {
            cred.set_trust(i, j, after);
            out.credibility_delta.push_back({i, j, before, after});
        }
    } else {
        const int ri = cred.reputation(i);
        const int rj = cred.reputation(j);
        const auto [ni, nj] = update_reputation(ri, rj, out.mean_before, out.mean_after, out.mean_shared,
                                                out.threshold, p.min_value, p.max_value);
        if (ni != ri) {
            cred.set_reputation(i, ni);
            out.credibility_delta.push_back({i, i, ri, ni});
        }
        if (nj != rj) {
            cred.set_reputation(j, nj);
            out.credibility_delta.push_back({j, j, rj, nj});
        }
    }
    return out;
}

}  // namespace tbo
