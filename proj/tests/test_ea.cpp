#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tbo/ea.hpp"

using namespace tbo;

namespace {

Genome with_fitness(std::vector<double> genes, double f) {
    Genome g(std::move(genes));
    g.fitness = f;
    return g;
}

bool in_bounds(const Genome& g, const Bounds& b) {
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.genes[i] < b[i].lo || g.genes[i] > b[i].hi) return false;
    return true;
}

AgentState make_agent(const Objective& f, std::size_t n, std::size_t lambda, double pc, double pm, Rng& rng) {
    AgentState a;
    a.population = init_population(n, f.bounds(), rng);
    a.offspring_size = lambda;
    a.crossover_rate = pc;
    a.mutation_rate = pm;
    for (auto& m : a.population.members) evaluate(m, f, rng);
    return a;
}

std::vector<double> sorted_fitness(const Population& p) {
    std::vector<double> v;
    for (const auto& m : p.members) v.push_back(*m.fitness);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("tournament_select") {
    const Objective f = make_objective("sphere", 1);
    Rng rng(1);
    SUBCASE("population of one") {
        Population p{{with_fitness({3.0}, 9.0)}, 1};
        CHECK(tournament_select(p, f, rng) == 0);
    }
    SUBCASE("better member wins three quarters of the time") {
        Population p{{with_fitness({1.0}, 1.0), with_fitness({3.0}, 9.0)}, 2};
        const int trials = 10000;
        int wins = 0;
        for (int k = 0; k < trials; ++k) wins += tournament_select(p, f, rng) == 0;
        CHECK(std::abs(wins / double(trials) - 0.75) < 0.02);
    }
    SUBCASE("ties split evenly") {
        Population p{{with_fitness({1.0}, 4.0), with_fitness({-1.0}, 4.0)}, 2};
        int first = 0;
        for (int k = 0; k < 10000; ++k) first += tournament_select(p, f, rng) == 0;
        CHECK(std::abs(first / 10000.0 - 0.5) < 0.02);
    }
    SUBCASE("empty population") {
        Population p;
        CHECK_THROWS_AS(tournament_select(p, f, rng), std::invalid_argument);
    }
}

TEST_CASE("sbx_crossover") {
    Rng rng(2);
    const Bounds box(6, Interval{-100.0, 100.0});
    const Genome a({1, 2, 3, 4, 5, 6});
    const Genome b({-6, 5, -4, 3, -2, 1});

    SUBCASE("p_c = 0 copies the parents") {
        auto [c1, c2] = sbx_crossover(a, b, 0.0, 20.0, box, rng);
        CHECK(c1.genes == a.genes);
        CHECK(c2.genes == b.genes);
    }
    SUBCASE("identical parents give identical children") {
        auto [c1, c2] = sbx_crossover(a, a, 1.0, 20.0, box, rng);
        CHECK(c1.genes == a.genes);
        CHECK(c2.genes == a.genes);
    }
    SUBCASE("child pair mean equals parent pair mean before clamping") {
        const Bounds wide(6, Interval{-1e9, 1e9});
        for (int k = 0; k < 10000; ++k) {
            auto [c1, c2] = sbx_crossover(a, b, 1.0, 20.0, wide, rng);
            for (std::size_t i = 0; i < 6; ++i)
                REQUIRE(std::abs((c1.genes[i] + c2.genes[i]) - (a.genes[i] + b.genes[i])) < 1e-9);
        }
    }
    SUBCASE("per_pair mode changes all genes or none") {
        auto [c1, c2] = sbx_crossover(a, b, 1.0, 20.0, box, rng, CrossoverMode::per_pair);
        for (std::size_t i = 0; i < 6; ++i) CHECK(c1.genes[i] != a.genes[i]);
        auto [d1, d2] = sbx_crossover(a, b, 0.0, 20.0, box, rng, CrossoverMode::per_pair);
        CHECK(d1.genes == a.genes);
    }
    SUBCASE("cache survives only an unchanged child") {
        Genome fa = a, fb = b;
        fa.fitness = 1.0;
        fb.fitness = 2.0;
        auto [c1, c2] = sbx_crossover(fa, fb, 0.0, 20.0, box, rng);
        CHECK(c1.fitness == 1.0);
        auto [d1, d2] = sbx_crossover(fa, fb, 1.0, 20.0, box, rng);
        CHECK_FALSE(d1.fitness);
        CHECK_FALSE(d2.fitness);
    }
}

TEST_CASE("polynomial_mutation") {
    Rng rng(3);
    const Bounds box(4, Interval{-10.0, 10.0});
    const Genome g({0.5, -2.0, 9.0, -9.5});

    SUBCASE("p_m = 0 is the identity") {
        Genome cached = g;
        cached.fitness = 3.0;
        const Genome out = polynomial_mutation(cached, 0.0, 40.0, box, rng);
        CHECK(out == cached);
    }
    SUBCASE("spread shrinks as the distribution index grows") {
        const Bounds one(1, Interval{-1.0, 1.0});
        std::vector<double> sds;
        for (double eta : {20.0, 40.0, 80.0}) {
            double sum = 0.0, sq = 0.0;
            const int n = 10000;
            for (int k = 0; k < n; ++k) {
                const double d = polynomial_mutation(Genome({0.0}), 1.0, eta, one, rng).genes[0];
                sum += d;
                sq += d * d;
            }
            sds.push_back(std::sqrt(sq / n - (sum / n) * (sum / n)));
        }
        CHECK(sds[0] > sds[1]);
        CHECK(sds[1] > sds[2]);
    }
    SUBCASE("mutated genome loses its cache") {
        Genome cached = g;
        cached.fitness = 3.0;
        CHECK_FALSE(polynomial_mutation(cached, 1.0, 40.0, box, rng).fitness);
    }
}

TEST_CASE("operators keep genes inside bounds (fuzz)") {
    Rng rng(4);
    const Bounds box{{-1.0, 1.0}, {0.0, 5.0}, {-100.0, -99.0}, {2.0, 2.0}};
    auto random_genome = [&] {
        std::vector<double> v(box.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform(box[i].lo, box[i].hi);
        return Genome(v);
    };
    for (int k = 0; k < 10000; ++k) {
        const Genome a = random_genome(), b = random_genome();
        const double rate = rng.uniform01();
        const double eta = 1.0 + 100.0 * rng.uniform01();
        auto [c1, c2] = sbx_crossover(a, b, rate, eta, box, rng, k % 2 ? CrossoverMode::per_pair : CrossoverMode::per_gene);
        REQUIRE(in_bounds(c1, box));
        REQUIRE(in_bounds(c2, box));
        REQUIRE(in_bounds(polynomial_mutation(a, rate, eta, box, rng), box));
    }
}

TEST_CASE("replace_mu_plus_lambda") {
    const Objective f = make_objective("sphere", 1);
    Rng rng(5);
    SUBCASE("empty offspring keeps the n best parents") {
        Population parents{{with_fitness({0}, 3), with_fitness({0}, 1), with_fitness({0}, 2)}, 3};
        const auto out = replace_mu_plus_lambda(parents, {}, 2, f, rng);
        CHECK(sorted_fitness(out) == std::vector<double>{1, 2});
        CHECK(out.capacity == 2);
    }
    SUBCASE("strict ordering picks the better offspring") {
        Population parents{{with_fitness({5}, 5)}, 1};
        Population offspring{{with_fitness({1}, 1), with_fitness({9}, 9)}, 2};
        const auto out = replace_mu_plus_lambda(parents, offspring, 1, f, rng);
        REQUIRE(out.size() == 1);
        CHECK(out.members[0].genes == std::vector<double>{1});
    }
    SUBCASE("ties prefer parents") {
        Population parents{{with_fitness({7}, 4)}, 1};
        Population offspring{{with_fitness({8}, 4)}, 1};
        const auto out = replace_mu_plus_lambda(parents, offspring, 1, f, rng);
        CHECK(out.members[0].genes == std::vector<double>{7});
    }
    SUBCASE("matches a sort-and-truncate oracle") {
        for (int trial = 0; trial < 200; ++trial) {
            Population parents, offspring;
            std::vector<std::pair<double, int>> all;
            for (int k = 0; k < 20; ++k) {
                const double v = std::floor(rng.uniform(0, 10));  // frequent ties
                auto& dst = k < 8 ? parents : offspring;
                dst.members.push_back(with_fitness({double(k)}, v));
                all.emplace_back(v, k);
            }
            std::sort(all.begin(), all.end());  // (fitness, insertion index) order
            const auto out = replace_mu_plus_lambda(parents, offspring, 5, f, rng);
            for (int k = 0; k < 5; ++k) REQUIRE(out.members[k].genes[0] == double(all[k].second));
        }
    }
    SUBCASE("union smaller than n is an error") {
        Population parents{{with_fitness({0}, 0)}, 1};
        CHECK_THROWS_AS(replace_mu_plus_lambda(parents, {}, 2, f, rng), std::invalid_argument);
        CHECK_THROWS_AS(replace_mu_plus_lambda({}, parents, 1, f, rng), std::invalid_argument);
    }
}

TEST_CASE("ea_step") {
    const Objective f = make_objective("sphere", 2);
    const EaParams params;

    SUBCASE("lambda = 0 leaves the population unchanged") {
        Rng rng(6);
        AgentState a = make_agent(f, 5, 0, 0.5, 0.5, rng);
        const Population before = a.population;
        ea_step(a, f, params, rng);
        CHECK(a.population == before);
    }

    SUBCASE("equals a straight-line walkthrough of the operator chain") {
        Rng init(7);
        AgentState a = make_agent(f, 5, 3, 0.6, 0.4, init);
        AgentState copy = a;

        Rng rng(8), ref(8);
        ea_step(a, f, params, rng);

        Population& pop = copy.population;
        Population offspring;
        // lambda = 3: two SBX pairs, last child of the second pair dropped
        for (int pair = 0; pair < 2; ++pair) {
            const std::size_t i = tournament_select(pop, f, ref);
            const std::size_t j = tournament_select(pop, f, ref);
            auto [c1, c2] = sbx_crossover(pop.members[i], pop.members[j], 0.6, params.sbx_eta, f.bounds(), ref);
            offspring.members.push_back(polynomial_mutation(c1, 0.4, params.mutation_eta, f.bounds(), ref));
            if (pair == 0) offspring.members.push_back(polynomial_mutation(c2, 0.4, params.mutation_eta, f.bounds(), ref));
        }
        REQUIRE(offspring.size() == 3);
        const Population expected = replace_mu_plus_lambda(pop, offspring, 5, f, ref);
        CHECK(a.population == expected);
        CHECK(rng.next_u64() == ref.next_u64());
    }

    SUBCASE("zero rates only copy existing genomes") {
        Rng rng(9);
        AgentState a = make_agent(f, 5, 15, 0.0, 0.0, rng);
        const Population original = a.population;
        for (int k = 0; k < 20; ++k) ea_step(a, f, params, rng);
        REQUIRE(a.population.size() == 5);
        for (const auto& g : a.population.members) {
            const bool known = std::any_of(original.members.begin(), original.members.end(),
                                           [&](const Genome& o) { return o.genes == g.genes; });
            CHECK(known);
        }
        CHECK(sorted_fitness(a.population).front() == sorted_fitness(original).front());
    }
}

TEST_CASE("ea_step elitism and size across benchmarks (fuzz)") {
    for (const auto& name : objective_names()) {
        ObjectiveParams quiet;
        quiet.noise_sigma = 0.0;
        const Objective f = make_objective(name, 9, quiet);
        Rng rng(10);
        AgentState a = make_agent(f, 5, 15, 0.3, 0.3, rng);
        double best = best_fitness(a.population);
        for (int step = 0; step < 1000; ++step) {
            ea_step(a, f, EaParams{}, rng);
            REQUIRE(a.population.size() == 5);
            const double now = best_fitness(a.population);
            REQUIRE(now <= best);
            best = now;
            for (const auto& m : a.population.members) REQUIRE(in_bounds(m, f.bounds()));
        }
    }
}
