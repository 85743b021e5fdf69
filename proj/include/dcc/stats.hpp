#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dcc/dataset.hpp"

namespace dcc {

/// Algorithms x datasets table of losses.
struct comparison_matrix {
    matrix<double> scores;
    std::vector<std::string> algorithm_names;
    std::vector<std::string> dataset_names;
};

struct wilcoxon_result {
    /// min(W+, W-)
    double statistic{0.0};
    double p_value{1.0};
    /// Pairs left after dropping zero differences.
    std::size_t n{0};
    /// True when p comes from the exact null distribution.
    bool exact{false};
};

/**
 * Two-sided Wilcoxon signed-rank test on paired samples.
 *
 * Zero differences are dropped. Without tied |differences| and with at most
 * 50 pairs the exact null distribution is used; otherwise the normal
 * approximation with tie and continuity corrections.
 */
wilcoxon_result wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_adjust(std::span<const double> p_values);

/// 1-based ranks; ties receive the mean of the ranks they span.
std::vector<double> mid_ranks(std::span<const double> values);

struct friedman_result {
    /// Mean rank per algorithm (rank 1 = lowest loss).
    std::vector<double> average_ranks;
    double statistic{0.0};
    double p_value{1.0};
    double critical_distance{0.0};
};

/// Studentized-range based Nemenyi constant for `a` algorithms (2..10), alpha in {0.05, 0.1}.
double nemenyi_q(std::size_t a, double alpha);

friedman_result friedman_nemenyi(const comparison_matrix &m, double alpha = 0.1);

/// Builds the table for one metric from a per-dataset means CSV written by the harness.
comparison_matrix load_comparison(const std::filesystem::path &means_csv, const std::string &metric);

}  // namespace dcc
