#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/permutation.hpp"
#include "dcc/prediction.hpp"

namespace dcc {

/// Marker for a label not yet decided in a partial label vector.
inline constexpr std::int8_t undecided = -1;

/// Lazy nearest-neighbour chain: the stored training rows plus the neighbour count.
struct knn_chain_model {
    feature_matrix features;
    label_matrix labels;
    std::size_t r{1};

    knn_chain_model() = default;
    knn_chain_model(feature_matrix features, label_matrix labels, std::size_t r);

    [[nodiscard]] std::size_t size() const noexcept { return features.rows(); }
    [[nodiscard]] std::size_t feature_count() const noexcept { return features.cols(); }
    [[nodiscard]] std::size_t label_count() const noexcept { return labels.cols(); }

    bool operator==(const knn_chain_model &) const = default;
};

struct neighborhood {
    std::vector<std::size_t> member_rows;
    /// Ascending; ties ordered by training row index.
    std::vector<double> distances;
};

/**
 * Distance at chain position `step` (1-based). Position 1 is the Euclidean
 * distance over features; later positions add the squared mismatches of the
 * labels decided at positions 1..step-1. Throws contract_error if the query
 * has one of those labels undecided.
 */
double chain_distance(const label_permutation &pi, std::size_t step, std::span<const double> query_features,
                      std::span<const std::int8_t> query_labels, std::span<const double> train_features,
                      std::span<const std::uint8_t> train_labels);

neighborhood find_neighborhood(const knn_chain_model &model, const label_permutation &pi, std::size_t step,
                               std::span<const double> query_features, std::span<const std::int8_t> query_labels);

prediction predict_chain_knn(const knn_chain_model &model, std::span<const double> x, const label_permutation &pi);

/// Per-label vote of the feature-only (position 1) neighbourhood.
prediction predict_br_knn(const knn_chain_model &model, std::span<const double> x);

/// First line `dcc-knn-chain 1 r=<R> labels=<L>`, then the dataset CSV.
void save_knn(std::ostream &out, const knn_chain_model &model,
              const std::vector<std::string> &feature_names = {}, const std::vector<std::string> &label_names = {});
knn_chain_model load_knn(std::istream &in);

}  // namespace dcc
