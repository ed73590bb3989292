#include "tbo/benchmarks.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tbo {

double sphere(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double griewank(std::span<const double> x) noexcept {
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum / 4000.0 - prod + 1.0;
}

double rastrigin(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v) + 10.0;
    return s;
}

double expanded_schaffer(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("expanded_schaffer needs at least 2 dimensions");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double r2 = x[i] * x[i] + x[i + 1] * x[i + 1];
        const double sn = std::sin(std::sqrt(r2));
        const double den = 1.0 + 0.001 * r2;
        s += 0.5 + (sn * sn - 0.5) / (den * den);
    }
    return s;
}

double schwefel(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
    return kSchwefelConstant * static_cast<double>(x.size()) - s;
}

double schwefel_noisy(std::span<const double> x, double sigma, Rng& rng) {
    const double base = schwefel(x);
    return sigma > 0.0 ? base + sigma * rng.normal() : base;
}

double lennard_jones(std::span<const double> x, double a, double b) {
    const std::size_t particles = x.size() / 3;
    if (particles < 2) throw std::invalid_argument("lennard_jones needs at least 2 particles (6 genes)");
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < particles; ++i) {
        for (std::size_t j = i + 1; j < particles; ++j) {
            const double dx = x[3 * i] - x[3 * j];
            const double dy = x[3 * i + 1] - x[3 * j + 1];
            const double dz = x[3 * i + 2] - x[3 * j + 2];
            const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
            if (r < kLjMinDistance) {
                e += kLjPenalty;
                continue;
            }
            const double inv6 = 1.0 / (r * r * r * r * r * r);
            e += a * inv6 * inv6 - b * inv6;
        }
    }
    return e;
}

// ---------------------------------------------------------------------------

namespace {

struct Entry {
    const char* name;
    ObjectiveKind kind;
};

constexpr Entry kRegistry[] = {
    {"sphere", ObjectiveKind::sphere},
    {"griewank", ObjectiveKind::griewank},
    {"rastrigin", ObjectiveKind::rastrigin},
    {"expanded_schaffer", ObjectiveKind::expanded_schaffer},
    {"schwefel_noise", ObjectiveKind::schwefel_noise},
    {"lennard_jones", ObjectiveKind::lennard_jones},
};

const char* name_of(ObjectiveKind kind) {
    for (const auto& e : kRegistry)
        if (e.kind == kind) return e.name;
    return "?";
}

}  // namespace

Interval canonical_interval(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::sphere: return {-100.0, 100.0};
        case ObjectiveKind::griewank: return {-600.0, 600.0};
        case ObjectiveKind::rastrigin: return {-5.12, 5.12};
        case ObjectiveKind::expanded_schaffer: return {-100.0, 100.0};
        case ObjectiveKind::schwefel_noise: return {-500.0, 500.0};
        case ObjectiveKind::lennard_jones: return {-3.0, 3.0};
    }
    return {};
}

Objective::Objective(ObjectiveKind kind, std::size_t dimension, ObjectiveParams params)
    : kind_(kind), name_(name_of(kind)), dimension_(dimension), lj_a_(params.lj_a), lj_b_(params.lj_b) {
    if (dimension == 0) throw std::invalid_argument(name_ + ": dimension must be >= 1");
    if (kind == ObjectiveKind::expanded_schaffer && dimension < 2)
        throw std::invalid_argument("expanded_schaffer needs dimension >= 2");
    if (kind == ObjectiveKind::lennard_jones) {
        if (dimension / 3 < 2) throw std::invalid_argument("lennard_jones needs dimension >= 6 (two particles)");
        if (!(params.lj_a > 0.0) || !(params.lj_b > 0.0))
            throw std::invalid_argument("lennard_jones constants must be positive");
    }
    bounds_.assign(dimension, canonical_interval(kind));

    const double d = static_cast<double>(dimension);
    switch (kind) {
        case ObjectiveKind::sphere:
        case ObjectiveKind::griewank:
        case ObjectiveKind::rastrigin:
        case ObjectiveKind::expanded_schaffer:
            optimum_ = KnownOptimum{"origin", 0.0};
            break;
        case ObjectiveKind::schwefel_noise:
            noise_sigma_ = params.noise_sigma < 0.0 ? 0.01 * d : params.noise_sigma;
            optimum_ = KnownOptimum{"all genes 420.9687", 0.0};
            break;
        case ObjectiveKind::lennard_jones:
            if (dimension / 3 == 2) {
                optimum_ = KnownOptimum{"pair at distance (2A/B)^(1/6)", -lj_b_ * lj_b_ / (4.0 * lj_a_)};
            }
            break;
    }
}

double Objective::operator()(std::span<const double> x, Rng& rng) const {
    switch (kind_) {
        case ObjectiveKind::sphere: return sphere(x);
        case ObjectiveKind::griewank: return griewank(x);
        case ObjectiveKind::rastrigin: return rastrigin(x);
        case ObjectiveKind::expanded_schaffer: return expanded_schaffer(x);
        case ObjectiveKind::schwefel_noise: return schwefel_noisy(x, noise_sigma_, rng);
        case ObjectiveKind::lennard_jones: return lennard_jones(x, lj_a_, lj_b_);
    }
    return 0.0;
}

const std::vector<std::string>& objective_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : kRegistry) v.emplace_back(e.name);
        return v;
    }();
    return names;
}

bool is_registered_objective(const std::string& name) {
    for (const auto& e : kRegistry)
        if (name == e.name) return true;
    return false;
}

Objective make_objective(const std::string& name, std::size_t dimension, ObjectiveParams params) {
    for (const auto& e : kRegistry)
        if (name == e.name) return Objective(e.kind, dimension, params);
    throw std::invalid_argument("unknown objective '" + name + "'");
}

}  // namespace tbo
