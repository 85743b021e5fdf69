#pragma once

#include <cstddef>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/ensemble.hpp"
#include "dcc/kernels.hpp"

namespace dcc {

/// {1, 2, ..., 10}
std::vector<double> default_beta_grid();
/// {1, 3, 5, 7, 9, 11}
std::vector<std::size_t> default_r_grid();

inline constexpr std::size_t tuning_folds = 3;

/**
 * 3-fold CV of a single dynamically ordered member per candidate; returns the
 * candidate with the lowest mean macro F1 loss (ties: smallest). Members are
 * trained once per fold and reused across candidates since beta only acts at
 * prediction time.
 */
double tune_beta(const multi_label_dataset &train, const ensemble_config &config,
                 const std::vector<double> &grid = default_beta_grid(), execution exec = execution::parallel);

/// As tune_beta for the kNN neighbour count; candidates larger than a fold's stored training part are skipped.
std::size_t tune_r(const multi_label_dataset &train, const ensemble_config &config,
                   const std::vector<std::size_t> &grid = default_r_grid(), execution exec = execution::parallel);

}  // namespace dcc
