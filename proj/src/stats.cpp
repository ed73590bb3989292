#include "tbo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tbo::stats {

Summary summarize(const SampleGroup& group) {
    const auto& v = group.values;
    if (v.size() < 2) throw std::invalid_argument("summarize: group '" + group.label + "' needs at least 2 values");
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {group.label, v.size(), mean, std::sqrt(ss / (n - 1.0))};
}

std::vector<Summary> summarize(const std::vector<SampleGroup>& groups) {
    if (groups.empty()) throw std::invalid_argument("summarize: no groups");
    std::vector<Summary> out;
    out.reserve(groups.size());
    for (const auto& g : groups) out.push_back(summarize(g));
    return out;
}

std::vector<double> midranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

struct RankData {
    std::vector<double> mean_rank;
    std::vector<std::size_t> sizes;
    double total = 0.0;
    double tie_sum = 0.0;  // sum of (t^3 - t) over tie blocks
};

RankData rank_groups(const std::vector<SampleGroup>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("rank test needs at least 2 groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.values.empty()) throw std::invalid_argument("rank test: group '" + g.label + "' is empty");
        pooled.insert(pooled.end(), g.values.begin(), g.values.end());
    }
    const auto ranks = midranks(pooled);

    RankData d;
    d.total = static_cast<double>(pooled.size());
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double sum = 0.0;
        for (std::size_t k = 0; k < g.values.size(); ++k) sum += ranks[offset + k];
        d.mean_rank.push_back(sum / static_cast<double>(g.values.size()));
        d.sizes.push_back(g.values.size());
        offset += g.values.size();
    }

    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        d.tie_sum += t * t * t - t;
        i = j + 1;
    }
    return d;
}

bool all_tied(const RankData& d) { return d.tie_sum == d.total * d.total * d.total - d.total; }

}  // namespace

TestReport kruskal_wallis(const std::vector<SampleGroup>& groups) {
    const RankData d = rank_groups(groups);
    TestReport r;
    r.dof = groups.size() - 1;
    if (all_tied(d)) {
        r.degenerate = true;
        return r;
    }
    const double n = d.total;
    double h = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double dev = d.mean_rank[g] - (n + 1.0) / 2.0;
        h += static_cast<double>(d.sizes[g]) * dev * dev;
    }
    h *= 12.0 / (n * (n + 1.0));
    h /= 1.0 - d.tie_sum / (n * n * n - n);
    r.statistic = h;
    r.p_value = chi_squared_sf(h, static_cast<double>(r.dof));
    return r;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adj(m);
    double running = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double scaled = std::min(1.0, static_cast<double>(m - k) * p_values[order[k]]);
        running = std::max(running, scaled);
        adj[order[k]] = running;
    }
    return adj;
}

TestReport dunn_holm(const std::vector<SampleGroup>& groups, double alpha) {
    TestReport r = kruskal_wallis(groups);
    const RankData d = rank_groups(groups);
    const double n = d.total;
    const double variance = r.degenerate ? 0.0 : n * (n + 1.0) / 12.0 - d.tie_sum / (12.0 * (n - 1.0));

    std::vector<double> raw;
    for (std::size_t a = 0; a < groups.size(); ++a) {
        for (std::size_t b = a + 1; b < groups.size(); ++b) {
            PairwiseResult p;
            p.label_a = groups[a].label;
            p.label_b = groups[b].label;
            if (variance > 0.0) {
                const double se = std::sqrt(variance * (1.0 / static_cast<double>(d.sizes[a]) +
                                                        1.0 / static_cast<double>(d.sizes[b])));
                p.z = (d.mean_rank[a] - d.mean_rank[b]) / se;
                p.p_raw = normal_two_sided_p(p.z);
            }
            raw.push_back(p.p_raw);
            r.pairwise.push_back(p);
        }
    }
    const auto adj = holm_adjust(raw);
    for (std::size_t k = 0; k < r.pairwise.size(); ++k) {
        r.pairwise[k].p_adjusted = adj[k];
        r.pairwise[k].significant = adj[k] < alpha;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Special functions. Series for x < a + 1, Lentz continued fraction otherwise.

namespace {

constexpr int kMaxIter = 10000;
constexpr double kEps = 1e-16;

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_fraction(double a, double x) {
    constexpr double tiny = std::numeric_limits<double>::min() / kEps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_squared_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return std::clamp(gamma_q(dof / 2.0, x / 2.0), 0.0, 1.0);
}

double normal_two_sided_p(double z) { return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0))); }

}  // namespace tbo::stats
