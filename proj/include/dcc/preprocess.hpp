#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/rng.hpp"

namespace dcc {

/// Single-label binary problem over a subset of a parent dataset's rows.
///
/// The view owns only indices. Its features are the parent's full feature rows
/// and its target is the parent's column `label`; the parent must be passed
/// alongside whenever those are needed.
struct label_view {
    std::size_t label{0};
    std::vector<std::size_t> rows;

    /// Every row of `ds`, target column `label`.
    static label_view all_rows(const multi_label_dataset &ds, std::size_t label);

    [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
    [[nodiscard]] std::uint8_t target(const multi_label_dataset &ds, std::size_t i) const {
        return ds.labels()(rows[i], label);
    }
    [[nodiscard]] std::span<const double> features(const multi_label_dataset &ds, std::size_t i) const {
        return ds.features().row(rows[i]);
    }
};

/// Selected input-feature columns for one label; strictly increasing, non-empty.
struct feature_subset {
    std::vector<std::size_t> indices;
    std::size_t target_label{0};

    bool operator==(const feature_subset &) const = default;
};

inline constexpr double default_max_imbalance_ratio = 20.0;
inline constexpr std::size_t default_feature_cap = 300;

/**
 * Random undersampling of the majority class.
 *
 * When majority/minority exceeds `max_ir` (and minority is non-empty), the
 * majority rows are subsampled uniformly to ceil(max_ir * minority). Minority
 * rows are always kept. Output rows keep their relative order.
 */
label_view undersample(const multi_label_dataset &ds, const label_view &view, double max_ir, rng_seed seed);

/// Pearson correlation; 0 when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/**
 * Correlation-based feature selection: greedy forward search on the merit
 *   k * mean|r_ft| / sqrt(k + k(k-1) * mean|r_ff|)
 * stopping at the first step that does not strictly improve it. A result
 * larger than `cap` is reduced to a uniform random subset of size `cap`.
 */
feature_subset select_features(const multi_label_dataset &ds, const label_view &view, std::size_t cap,
                               rng_seed seed);

/// Uniform random `cap`-sized subset of `indices` (sorted); identity when already small enough.
std::vector<std::size_t> cap_subset(std::vector<std::size_t> indices, std::size_t cap, rng_seed seed);

}  // namespace dcc
