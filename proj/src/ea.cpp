#include "tbo/ea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tbo {

std::size_t tournament_select(Population& p, const Objective& f, Rng& rng) {
    if (p.empty()) throw std::invalid_argument("tournament_select: empty population");
    const std::size_t a = rng.index(p.size());
    const std::size_t b = rng.index(p.size());
    const double fa = evaluate(p.members[a], f, rng);
    const double fb = evaluate(p.members[b], f, rng);
    if (fa < fb) return a;
    if (fb < fa) return b;
    return rng.coin() ? a : b;
}

namespace {

constexpr double kSbxEpsilon = 1e-14;

// Deb's spread factor for one uniform draw.
double sbx_beta(double u, double eta) {
    const double e = 1.0 / (eta + 1.0);
    if (u <= 0.5) return std::pow(2.0 * u, e);
    return std::pow(1.0 / (2.0 * (1.0 - u)), e);
}

}  // namespace

std::pair<Genome, Genome> sbx_crossover(const Genome& a, const Genome& b, double p_c, double eta_c,
                                        const Bounds& bounds, Rng& rng, CrossoverMode mode) {
    if (a.size() != b.size() || a.size() != bounds.size())
        throw std::invalid_argument("sbx_crossover: length mismatch");
    Genome c1 = a;
    Genome c2 = b;
    bool changed1 = false;
    bool changed2 = false;

    const bool pair_fires = mode == CrossoverMode::per_pair && rng.uniform01() < p_c;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool fires = mode == CrossoverMode::per_gene ? rng.uniform01() < p_c : pair_fires;
        if (!fires) continue;
        const double x1 = a.genes[i];
        const double x2 = b.genes[i];
        if (std::abs(x1 - x2) < kSbxEpsilon) continue;
        const double beta = sbx_beta(rng.uniform01(), eta_c);
        const double y1 = bounds[i].clamp(0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2));
        const double y2 = bounds[i].clamp(0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2));
        if (y1 != x1) {
            c1.genes[i] = y1;
            changed1 = true;
        }
        if (y2 != x2) {
            c2.genes[i] = y2;
            changed2 = true;
        }
    }
    if (changed1) c1.invalidate();
    if (changed2) c2.invalidate();
    return {std::move(c1), std::move(c2)};
}

Genome polynomial_mutation(const Genome& g, double p_m, double eta_m, const Bounds& bounds, Rng& rng) {
    if (g.size() != bounds.size()) throw std::invalid_argument("polynomial_mutation: length mismatch");
    Genome out = g;
    bool changed = false;
    const double pow_exp = 1.0 / (eta_m + 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(rng.uniform01() < p_m)) continue;
        const double lo = bounds[i].lo;
        const double hi = bounds[i].hi;
        if (!(hi > lo)) continue;
        const double y = g.genes[i];
        const double delta1 = (y - lo) / (hi - lo);
        const double delta2 = (hi - y) / (hi - lo);
        const double u = rng.uniform01();
        double deltaq = 0.0;
        if (u <= 0.5) {
            const double xy = 1.0 - delta1;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
            deltaq = std::pow(val, pow_exp) - 1.0;
        } else {
            const double xy = 1.0 - delta2;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
            deltaq = 1.0 - std::pow(val, pow_exp);
        }
        const double v = bounds[i].clamp(y + deltaq * (hi - lo));
        if (v != y) {
            out.genes[i] = v;
            changed = true;
        }
    }
    if (changed) out.invalidate();
    return out;
}

Population replace_mu_plus_lambda(Population parents, Population offspring, std::size_t n, const Objective& f,
                                  Rng& rng) {
    if (parents.empty()) throw std::invalid_argument("replace_mu_plus_lambda: empty parent population");
    if (parents.size() + offspring.size() < n)
        throw std::invalid_argument("replace_mu_plus_lambda: union smaller than target size");

    std::vector<Genome> pool = std::move(parents.members);
    pool.reserve(pool.size() + offspring.size());
    for (auto& g : offspring.members) pool.push_back(std::move(g));
    for (auto& g : pool) evaluate(g, f, rng);

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return *pool[x].fitness < *pool[y].fitness; });

    Population out;
    out.capacity = n;
    out.members.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.members.push_back(std::move(pool[order[k]]));
    return out;
}

void ea_step(AgentState& agent, const Objective& f, const EaParams& params, Rng& rng) {
    auto& pop = agent.population;
    const std::size_t lambda = agent.offspring_size;
    if (lambda == 0) return;

    Population offspring;
    offspring.capacity = lambda;
    offspring.members.reserve(lambda + 1);
    while (offspring.size() < lambda) {
        const std::size_t ia = tournament_select(pop, f, rng);
        const std::size_t ib = tournament_select(pop, f, rng);
        auto [c1, c2] = sbx_crossover(pop.members[ia], pop.members[ib], agent.crossover_rate, params.sbx_eta,
                                      f.bounds(), rng, params.crossover_mode);
        offspring.members.push_back(polynomial_mutation(c1, agent.mutation_rate, params.mutation_eta, f.bounds(), rng));
        if (offspring.size() < lambda)
            offspring.members.push_back(
                polynomial_mutation(c2, agent.mutation_rate, params.mutation_eta, f.bounds(), rng));
    }
    const std::size_t n = pop.capacity;
    pop = replace_mu_plus_lambda(std::move(pop), std::move(offspring), n, f, rng);
}

}  // namespace tbo
