#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/permutation.hpp"

namespace dcc {

/// Validation rows with their true labels and the binary relevance decisions for them.
struct validation_cache {
    feature_matrix features;
    label_matrix labels;
    label_matrix br_predictions;

    validation_cache() = default;
    validation_cache(feature_matrix features, label_matrix labels, label_matrix br_predictions);

    [[nodiscard]] std::size_t size() const noexcept { return features.rows(); }
    [[nodiscard]] std::size_t label_count() const noexcept { return labels.cols(); }

    bool operator==(const validation_cache &) const = default;
};

struct fuzzy_neighborhood {
    std::vector<double> memberships;
    double beta{1.0};
};

struct confusion_mass {
    double tp{0.0};
    double fp{0.0};
    double fn{0.0};
};

/// exp(-beta * |query - point|^2)
double membership(std::span<const double> query, std::span<const double> point, double beta);

fuzzy_neighborhood neighborhood_of(const validation_cache &cache, std::span<const double> query, double beta);

/// Sigma-count cardinalities of the local TP/FP/FN sets of label `l` around `query`.
confusion_mass local_counts(const validation_cache &cache, std::size_t l, std::span<const double> query, double beta);
confusion_mass local_counts(const validation_cache &cache, std::size_t l, std::span<const double> memberships);

/// 2tp / (2tp + fp + fn), 0 when the denominator is 0.
double local_f1(double tp, double fp, double fn);
inline double local_f1(const confusion_mass &c) { return local_f1(c.tp, c.fp, c.fn); }

/**
 * Local F1 of every label around `query`.
 *
 * Memberships are rescaled by exp(beta * min distance^2) before summing so that
 * remote queries do not underflow every weight to zero. A common factor
 * cancels in the F1 ratio.
 */
std::vector<double> local_f1_scores(const validation_cache &cache, std::span<const double> query, double beta);

/// Labels by descending score, ties by ascending label index.
label_permutation order_by_scores(std::span<const double> scores);

label_permutation dynamic_permutation(const validation_cache &cache, std::span<const double> query, double beta);

}  // namespace dcc
