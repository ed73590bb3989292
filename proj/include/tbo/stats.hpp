#pragma once

/// @file stats.hpp
/// @brief Rank-based comparison of final-fitness samples: descriptive summaries,
/// the Kruskal-Wallis omnibus test and Dunn's post-hoc test with Holm adjustment.

#include <string>
#include <vector>

namespace tbo::stats {

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct Summary {
    std::string label;
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
};

/// Sample mean and standard deviation (n - 1 denominator).
/// Throws std::invalid_argument for groups with fewer than two values.
Summary summarize(const SampleGroup& group);
std::vector<Summary> summarize(const std::vector<SampleGroup>& groups);

struct PairwiseResult {
    std::string label_a;
    std::string label_b;
    double z = 0.0;
    double p_raw = 1.0;
    double p_adjusted = 1.0;
    bool significant = false;
};

struct TestReport {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t dof = 0;
    /// Every value across all groups identical: H = 0 and p = 1 by convention.
    bool degenerate = false;
    std::vector<PairwiseResult> pairwise;
};

/// Mid-ranks (1-based) of the pooled values.
std::vector<double> midranks(const std::vector<double>& values);

/// Kruskal-Wallis H with tie correction; chi-squared tail with k - 1 degrees of freedom.
/// Throws for fewer than two groups or an empty group.
TestReport kruskal_wallis(const std::vector<SampleGroup>& groups);

/// Dunn z-tests on mean ranks (tie-corrected), two-sided, Holm step-down adjusted.
/// Pairs are ordered (0,1), (0,2), ..., (1,2), ...
TestReport dunn_holm(const std::vector<SampleGroup>& groups, double alpha = 0.01);

/// Holm step-down adjustment with monotonicity enforcement, clipped at 1.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
/// Upper tail of the chi-squared distribution.
double chi_squared_sf(double x, double dof);
/// Two-sided standard normal tail probability 2 * (1 - Phi(|z|)).
double normal_two_sided_p(double z);

}  // namespace tbo::stats
