#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tbo/ea.hpp"
#include "tbo/socio.hpp"

using namespace tbo;

namespace {

Genome cached(std::vector<double> genes, double f) {
    Genome g(std::move(genes));
    g.fitness = f;
    return g;
}

Population with_values(const std::vector<double>& values) {
    Population p;
    for (std::size_t k = 0; k < values.size(); ++k) p.members.push_back(cached({double(k)}, values[k]));
    p.capacity = values.size();
    return p;
}

// Brute-force rank oracle: position of every member in a descending ordering,
// ties resolved by insertion order.
std::vector<std::size_t> worst_first_oracle(const std::vector<double>& f, std::size_t take) {
    std::vector<bool> used(f.size(), false);
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < std::min(take, f.size()); ++r) {
        std::size_t pick = f.size();
        for (std::size_t k = 0; k < f.size(); ++k)
            if (!used[k] && (pick == f.size() || f[k] > f[pick])) pick = k;
        used[pick] = true;
        out.push_back(pick);
    }
    return out;
}

AgentState agent_from(std::size_t id, std::vector<std::vector<double>> genes, const Objective& f, Rng& rng,
                      ScCrossoverConfig cfg = {}) {
    AgentState a;
    a.id = id;
    for (auto& g : genes) a.population.members.emplace_back(std::move(g));
    a.population.capacity = a.population.size();
    a.crossover = cfg;
    for (auto& m : a.population.members) evaluate(m, f, rng);
    return a;
}

}  // namespace

TEST_CASE("select_shared") {
    const Objective f = make_objective("sphere", 1);
    Rng rng(1);
    SUBCASE("credibility at least the population size shares everything") {
        auto p = with_values({3, 1, 7, 5});
        CHECK(select_shared(p, f, 4, rng).members.size() == 4);
        CHECK(select_shared(p, f, 50, rng).members.size() == 4);
    }
    SUBCASE("T = 1 picks the worst member") {
        auto p = with_values({3, 1, 7, 5});
        const auto s = select_shared(p, f, 1, rng);
        REQUIRE(s.members.size() == 1);
        CHECK(*s.members[0].fitness == 7);
    }
    SUBCASE("T = 2 picks the two worst") {
        auto p = with_values({3, 1, 7, 5});
        const auto s = select_shared(p, f, 2, rng);
        REQUIRE(s.members.size() == 2);
        CHECK(*s.members[0].fitness == 7);
        CHECK(*s.members[1].fitness == 5);
    }
    SUBCASE("shared members are copies") {
        auto p = with_values({3, 1});
        auto s = select_shared(p, f, 2, rng);
        s.members[0].genes[0] = 99.0;
        CHECK(p.members[0].genes[0] == 0.0);
    }
    SUBCASE("errors") {
        Population empty;
        CHECK_THROWS_AS(select_shared(empty, f, 1, rng), std::invalid_argument);
        auto p = with_values({1});
        CHECK_THROWS_AS(select_shared(p, f, 0, rng), std::invalid_argument);
    }
    SUBCASE("exhaustive agreement with the rank oracle for small populations") {
        Rng gen(2);
        for (std::size_t n = 1; n <= 8; ++n) {
            for (int trial = 0; trial < 125; ++trial) {
                std::vector<double> values(n);
                for (auto& v : values) v = std::floor(gen.uniform(0, 4));
                auto p = with_values(values);
                const int t = 1 + static_cast<int>(gen.index(n + 2));
                const auto s = select_shared(p, f, t, rng);
                const auto expect = worst_first_oracle(values, std::size_t(t));
                REQUIRE(s.members.size() == expect.size());
                for (std::size_t k = 0; k < expect.size(); ++k) REQUIRE(s.members[k].genes[0] == double(expect[k]));
            }
        }
    }
}

TEST_CASE("acceptance_threshold") {
    CHECK(acceptance_threshold(10.0) == 20.0);
    CHECK(acceptance_threshold(0.0) == 0.0);
    CHECK(acceptance_threshold(-50.0) == 0.0);
    const Objective f = make_objective("sphere", 1);
    Rng rng(1);
    auto p = with_values({4, 6});
    CHECK(acceptance_threshold(p, f, rng) == 10.0);
}

TEST_CASE("divergence_ranking") {
    CHECK(divergence_ranking(Genome({0, 0, 0}), Genome({1, 3, 2})) == std::vector<std::size_t>{1, 2, 0});
    CHECK(divergence_ranking(Genome({5, 5, 5, 5}), Genome({5, 5, 5, 5})) == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK_THROWS_AS(divergence_ranking(Genome({0}), Genome({0, 1})), std::invalid_argument);

    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> y(6), x(6);
        for (std::size_t i = 0; i < 6; ++i) {
            y[i] = std::floor(rng.uniform(0, 3));
            x[i] = std::floor(rng.uniform(0, 3));
        }
        std::vector<double> d(6);
        for (std::size_t i = 0; i < 6; ++i) d[i] = std::abs(x[i] - y[i]);
        const auto expect = worst_first_oracle(d, 6);
        REQUIRE(divergence_ranking(Genome(y), Genome(x)) == expect);
    }
}

TEST_CASE("phi") {
    const Genome y({0, 0});
    const Genome x({4, 1});
    CHECK(phi(y, x, 1, GeneOp::swap).genes == std::vector<double>{4, 0});
    CHECK(phi(y, x, 1, GeneOp::average).genes == std::vector<double>{2, 0});
    CHECK(phi(y, x, 2, GeneOp::swap).genes == x.genes);
    CHECK_FALSE(phi(cached({0, 0}, 1.0), x, 1, GeneOp::swap).fitness);
    CHECK_THROWS(phi(y, x, 0, GeneOp::swap));
    CHECK_THROWS(phi(y, x, 3, GeneOp::swap));
}

TEST_CASE("sc_crossover offspring counts") {
    Rng rng(4);
    Population recipient;
    for (int k = 0; k < 5; ++k) recipient.members.emplace_back(std::vector<double>{double(k), 1.0, -double(k), 2.0});
    recipient.capacity = 5;
    SharedPopulation shared;
    for (int k = 0; k < 3; ++k) shared.members.emplace_back(std::vector<double>{9.0, 9.0, 9.0, double(k)});

    SUBCASE("weak gives one offspring per shared genome") {
        const auto o = sc_crossover(recipient, shared, 7, {GenomeIntensity::weak, GeneOp::swap}, rng);
        CHECK(o.size() == 3);
    }
    SUBCASE("moderate and strong give K per shared genome") {
        // K = min(credibility_out, D) = min(3, 4)
        CHECK(sc_crossover(recipient, shared, 3, {GenomeIntensity::moderate, GeneOp::swap}, rng).size() == 9);
        CHECK(sc_crossover(recipient, shared, 3, {GenomeIntensity::strong, GeneOp::average}, rng).size() == 9);
        // capped at D
        CHECK(sc_crossover(recipient, shared, 40, {GenomeIntensity::strong, GeneOp::swap}, rng).size() == 12);
    }
    SUBCASE("strong changes at most one gene against identical partners") {
        Population same;
        for (int k = 0; k < 4; ++k) same.members.emplace_back(std::vector<double>{0.0, 0.0, 0.0, 0.0});
        same.capacity = 4;
        const auto o = sc_crossover(same, shared, 4, {GenomeIntensity::strong, GeneOp::swap}, rng);
        for (std::size_t k = 0; k < o.size(); ++k) {
            const auto& y = shared.members[k / 4];
            int diff = 0;
            for (std::size_t i = 0; i < 4; ++i) diff += o.members[k].genes[i] != y.genes[i];
            CHECK(diff <= 1);
            CHECK_FALSE(o.members[k].fitness);
        }
    }
    SUBCASE("weak modifies exactly the K most divergent genes") {
        const auto o = sc_crossover(recipient, shared, 2, {GenomeIntensity::weak, GeneOp::swap}, rng);
        for (std::size_t k = 0; k < o.size(); ++k) {
            int diff = 0;
            for (std::size_t i = 0; i < 4; ++i) diff += o.members[k].genes[i] != shared.members[k].genes[i];
            CHECK(diff <= 2);
        }
    }
    SUBCASE("fixed partner policy reuses one partner per shared genome") {
        Population distinct;
        for (int k = 0; k < 50; ++k) distinct.members.emplace_back(std::vector<double>{double(k), 0.0, 0.0, 0.0});
        distinct.capacity = 50;
        SharedPopulation one;
        one.members.emplace_back(std::vector<double>{1000.0, 0.0, 0.0, 0.0});
        const auto o = sc_crossover(distinct, one, 4, {GenomeIntensity::moderate, GeneOp::swap}, rng, PartnerPolicy::fixed);
        for (const auto& g : o.members) CHECK(g.genes == o.members[0].genes);
        const auto r = sc_crossover(distinct, one, 4, {GenomeIntensity::moderate, GeneOp::swap}, rng, PartnerPolicy::redraw);
        bool varied = false;
        for (const auto& g : r.members) varied |= g.genes != r.members[0].genes;
        CHECK(varied);
    }
}

TEST_CASE("sc_variation threshold cases") {
    const Objective f = make_objective("sphere", 1);
    Rng rng(5);
    const ScCrossoverConfig cfg{GenomeIntensity::weak, GeneOp::average};
    auto run = [&](std::vector<double> p_values, std::vector<double> q_values) {
        auto p = with_values(p_values);
        SharedPopulation q;
        for (double v : q_values) q.members.push_back(cached({50.0}, v));
        return std::pair{sc_variation(p, q, 1, cfg, f, rng), p};
    };
    SUBCASE("shared mean 30 against recipient mean 10 is rejected") {
        auto [r, p] = run({5, 15}, {30});
        CHECK_FALSE(r.accepted);
        CHECK(r.offspring == p);
    }
    SUBCASE("shared mean 5 against recipient mean 10 goes through crossover") {
        auto [r, p] = run({5, 15}, {5});
        CHECK(r.accepted);
        CHECK(r.offspring.size() == 1);
    }
    SUBCASE("negative recipient mean: threshold 0, shared mean -1 accepted") {
        auto [r, p] = run({-100}, {-1});
        CHECK(r.accepted);
    }
}

TEST_CASE("update_trust") {
    CHECK(update_trust(5, 10, 9, 100, 20, 1, 50) == 6);   // improvement
    CHECK(update_trust(1, 10, 10, 30, 20, 1, 50) == 1);   // rejection at the floor
    CHECK(update_trust(5, 10, 10, 30, 20, 1, 50) == 4);   // rejection
    CHECK(update_trust(5, 10, 10, 15, 20, 1, 50) == 5);   // accepted, no improvement
    CHECK(update_trust(50, 10, 9, 15, 20, 1, 50) == 50);  // ceiling
}

TEST_CASE("update_reputation") {
    CHECK(update_reputation(30, 30, 10, 9, 5, 20, 1, 50) == std::pair{29, 31});
    CHECK(update_reputation(50, 1, 10, 10, 30, 20, 1, 50) == std::pair{50, 1});
    CHECK(update_reputation(20, 20, 10, 10, 30, 20, 1, 50) == std::pair{21, 19});
    CHECK(update_reputation(7, 9, 10, 10, 15, 20, 1, 50) == std::pair{7, 9});
    CHECK(update_reputation(1, 50, 10, 9, 5, 20, 1, 50) == std::pair{1, 50});
}

TEST_CASE("credibility updates stay in range (fuzz)") {
    Rng rng(6);
    int t = 5, ri = 25, rj = 25;
    for (int k = 0; k < 10000; ++k) {
        const double before = rng.uniform(-10, 10);
        const double after = before + rng.uniform(-1, 1) * (rng.coin() ? 1.0 : 0.0);
        const double shared = rng.uniform(-30, 30);
        const double thr = acceptance_threshold(before);
        t = update_trust(t, before, after, shared, thr, 1, 50);
        std::tie(ri, rj) = update_reputation(ri, rj, before, after, shared, thr, 1, 50);
        REQUIRE((t >= 1 && t <= 50));
        REQUIRE((ri >= 1 && ri <= 50));
        REQUIRE((rj >= 1 && rj <= 50));
    }
}

TEST_CASE("interaction_step") {
    const Objective f = make_objective("sphere", 2);

    SUBCASE("rejected share leaves the recipient untouched and lowers trust") {
        Rng rng(7);
        AgentState recipient = agent_from(0, {{1, 1}, {2, 2}, {3, 3}}, f, rng);
        AgentState sender = agent_from(1, {{50, 50}, {60, 60}, {70, 70}}, f, rng);
        CredibilityState cred({CredibilityKind::trust, 5, 1, 50}, 2);
        const Population before = recipient.population;
        const auto out = interaction_step(recipient, sender, cred, f, rng);
        CHECK_FALSE(out.accepted);
        CHECK_FALSE(out.improved);
        CHECK(recipient.population == before);
        CHECK(cred.trust(0, 1) == 4);
        CHECK(cred.trust(1, 0) == 5);
    }

    SUBCASE("improvement raises trust") {
        Rng rng(8);
        AgentState recipient = agent_from(0, {{50, 50}, {60, 60}, {70, 70}}, f, rng, {GenomeIntensity::strong, GeneOp::swap});
        AgentState sender = agent_from(1, {{1, 1}, {2, 2}, {3, 3}}, f, rng);
        CredibilityState cred({CredibilityKind::trust, 5, 1, 50}, 2);
        const auto out = interaction_step(recipient, sender, cred, f, rng);
        CHECK(out.accepted);
        CHECK(out.improved);
        CHECK(out.mean_after < out.mean_before);
        CHECK(cred.trust(0, 1) == 6);
        CHECK(cred.trust(1, 0) == 5);
        CHECK(recipient.population.size() == 3);
        REQUIRE(out.credibility_delta.size() == 1);
        CHECK(out.credibility_delta[0].before == 5);
        CHECK(out.credibility_delta[0].after == 6);
    }

    SUBCASE("reputation mode updates exactly both agents") {
        Rng rng(9);
        AgentState recipient = agent_from(1, {{50, 50}, {60, 60}, {70, 70}}, f, rng, {GenomeIntensity::moderate, GeneOp::average});
        AgentState sender = agent_from(2, {{1, 1}, {2, 2}, {3, 3}}, f, rng);
        CredibilityState cred({CredibilityKind::reputation, 30, 1, 50}, 3);
        const auto out = interaction_step(recipient, sender, cred, f, rng);
        REQUIRE(out.improved);
        CHECK(cred.reputation(0) == 30);
        CHECK(cred.reputation(1) == 29);
        CHECK(cred.reputation(2) == 31);
    }

    SUBCASE("share size follows sender trust, strength follows recipient trust") {
        Rng rng(10);
        AgentState recipient = agent_from(0, {{50, 50}, {60, 60}, {70, 70}}, f, rng, {GenomeIntensity::moderate, GeneOp::swap});
        AgentState sender = agent_from(1, {{1, 1}, {2, 2}, {3, 3}}, f, rng);
        CredibilityState cred({CredibilityKind::trust, 1, 1, 50}, 2);
        cred.set_trust(1, 0, 2);  // sender trusts recipient: share 2 genomes
        cred.set_trust(0, 1, 1);  // recipient trusts sender: K = 1
        const auto out = interaction_step(recipient, sender, cred, f, rng);
        CHECK(out.shared_count == 2);
        CHECK(out.offspring_count == 2);
    }

    SUBCASE("equals a hand-stepped composition on the same stream") {
        for (std::uint64_t seed = 11; seed < 31; ++seed) {
            Rng init(seed);
            AgentState recipient = agent_from(0, {}, f, init, {GenomeIntensity::strong, GeneOp::average});
            recipient.population = init_population(3, f.bounds(), init);
            AgentState sender = agent_from(1, {}, f, init);
            sender.population = init_population(3, f.bounds(), init);
            for (auto* a : {&recipient, &sender})
                for (auto& m : a->population.members) evaluate(m, f, init);
            CredibilityState cred({CredibilityKind::trust, 2, 1, 50}, 2);

            AgentState r2 = recipient, s2 = sender;
            CredibilityState c2 = cred;
            Rng rng(seed * 7), ref(seed * 7);
            const auto out = interaction_step(recipient, sender, cred, f, rng);

            const double before = mean_fitness(r2.population, f, ref);
            auto shared = select_shared(s2.population, f, c2.trust(1, 0), ref);
            auto variation = sc_variation(r2.population, shared, c2.trust(0, 1), r2.crossover, f, ref);
            double after = before;
            if (variation.accepted) {
                r2.population = replace_mu_plus_lambda(r2.population, variation.offspring, 3, f, ref);
                after = mean_fitness(r2.population, f, ref);
            }
            double qsum = 0.0;
            for (auto& g : shared.members) qsum += *g.fitness;
            const int t = update_trust(c2.trust(0, 1), before, after, qsum / double(shared.members.size()),
                                       acceptance_threshold(before), 1, 50);

            CHECK(out.accepted == variation.accepted);
            CHECK(out.improved == (after < before));
            CHECK(recipient.population == r2.population);
            CHECK(cred.trust(0, 1) == t);
            CHECK(cred.trust(1, 0) == 2);
            CHECK(sender.population == s2.population);
            CHECK(rng.next_u64() == ref.next_u64());
            if (out.improved) CHECK(out.accepted);
        }
    }

    SUBCASE("recipient and sender must differ") {
        Rng rng(12);
        AgentState a = agent_from(0, {{1, 1}}, f, rng);
        CredibilityState cred({CredibilityKind::trust, 5, 1, 50}, 2);
        CHECK_THROWS(interaction_step(a, a, cred, f, rng));
    }
}
