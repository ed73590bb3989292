#pragma once

/// @file benchmarks.hpp
/// @brief The six benchmark objectives with their canonical domains.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbo/core.hpp"

namespace tbo {

// Raw objective kernels. All are minimization problems.

double sphere(std::span<const double> x) noexcept;
double griewank(std::span<const double> x) noexcept;
double rastrigin(std::span<const double> x) noexcept;
/// Requires at least two genes.
double expanded_schaffer(std::span<const double> x);
/// Noiseless Schwefel 2.26 variant shifted so the optimum is near 0.
double schwefel(std::span<const double> x) noexcept;
/// 418.9829 D - sum x_i sin(sqrt|x_i|) + N(0, sigma). sigma == 0 gives the noiseless value.
double schwefel_noisy(std::span<const double> x, double sigma, Rng& rng);
/// Pair potential summed over floor(D/3) particles. Requires at least two particles.
double lennard_jones(std::span<const double> x, double a = 1.0, double b = 2.0);

inline constexpr double kSchwefelConstant = 418.9829;
inline constexpr double kSchwefelOptimum = 420.9687;
inline constexpr double kLjMinDistance = 1e-12;
inline constexpr double kLjPenalty = 1e12;

enum class ObjectiveKind { sphere, griewank, rastrigin, expanded_schaffer, schwefel_noise, lennard_jones };

struct KnownOptimum {
    std::string location;
    double value = 0.0;
};

/// A benchmark bound to a dimension: name, box, evaluation and optimum descriptor.
class Objective {
public:
    Objective(ObjectiveKind kind, std::size_t dimension, ObjectiveParams params = {});

    [[nodiscard]] ObjectiveKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const Bounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] bool noisy() const noexcept { return noise_sigma_ > 0.0; }
    [[nodiscard]] double noise_sigma() const noexcept { return noise_sigma_; }
    [[nodiscard]] const std::optional<KnownOptimum>& known_optimum() const noexcept { return optimum_; }

    /// Evaluates x; the RNG is only consumed by noisy objectives.
    [[nodiscard]] double operator()(std::span<const double> x, Rng& rng) const;

private:
    ObjectiveKind kind_;
    std::string name_;
    std::size_t dimension_;
    Bounds bounds_;
    double noise_sigma_ = 0.0;
    double lj_a_ = 1.0;
    double lj_b_ = 2.0;
    std::optional<KnownOptimum> optimum_;
};

/// Registered names: sphere, griewank, rastrigin, expanded_schaffer, schwefel_noise, lennard_jones.
const std::vector<std::string>& objective_names();
bool is_registered_objective(const std::string& name);
/// Throws std::invalid_argument for unknown names or unsupported dimensions.
Objective make_objective(const std::string& name, std::size_t dimension, ObjectiveParams params = {});
/// Symmetric per-dimension domain for a registered objective.
Interval canonical_interval(ObjectiveKind kind);

}  // namespace tbo
