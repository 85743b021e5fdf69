#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/ensemble.hpp"
#include "dcc/kernels.hpp"
#include "dcc/metrics.hpp"
#include "dcc/stats.hpp"

namespace dcc {

struct algorithm_spec {
    base_classifier base{base_classifier::naive_bayes};
    ordering_policy ordering{ordering_policy::dynamic};

    /// e.g. "nb-dynamic"
    [[nodiscard]] std::string name() const;
    static algorithm_spec parse(const std::string &s);
};

struct dataset_spec {
    std::filesystem::path path;
    std::size_t label_count{1};
    std::string name;
};

/**
 * Experiment description. Text form, one `key = value` per line:
 *
 *     dataset   = data/flags.csv : 7     (repeatable; path : label count)
 *     algorithm = nb:dynamic             (repeatable; base:ordering)
 *     folds = 10
 *     k = 20
 *     beta = tune | <number>
 *     r = tune | <integer>
 *     bag_fraction, split_ratio, max_ir, feature_cap, smoothing, fixed_order
 *     seed = 1
 *     out = results/
 *
 * Relative dataset paths resolve against the spec file's directory.
 */
struct experiment_spec {
    std::vector<dataset_spec> datasets;
    std::vector<algorithm_spec> algorithms;
    std::size_t folds{10};
    ensemble_config config;
    std::filesystem::path out_dir;
    rng_seed seed{};

    void validate() const;
};

experiment_spec parse_experiment_spec(std::istream &in, const std::filesystem::path &base_dir = {});
experiment_spec load_experiment_spec(const std::filesystem::path &path);

struct cell_result {
    std::string dataset;
    std::string algorithm;
    std::size_t fold{0};
    std::optional<evaluation_report> report;
    /// Failure description when `report` is empty.
    std::string error;
};

struct experiment_result {
    /// Ordered by dataset, then algorithm, then fold.
    std::vector<cell_result> cells;
    /// One table per metric, in metric_names order; NaN where every fold failed.
    std::vector<comparison_matrix> comparisons;
};

/**
 * One cross-validation cell: standardize on the training part, build the
 * ensemble, evaluate on the test part. Only `train` influences the model.
 */
ensemble build_cell_ensemble(const multi_label_dataset &train, const algorithm_spec &algorithm,
                             const ensemble_config &config, rng_seed cell_seed, execution exec);
evaluation_report run_cell(const multi_label_dataset &train, const multi_label_dataset &test,
                           const algorithm_spec &algorithm, const ensemble_config &config, rng_seed cell_seed,
                           execution exec);

/// Mean report over k folds of `ds` for one algorithm; throws on the first failing fold.
evaluation_report cross_validate(const multi_label_dataset &ds, const algorithm_spec &algorithm,
                                 const ensemble_config &config, std::size_t folds, rng_seed seed,
                                 execution exec = execution::parallel);

/// Runs every (dataset, algorithm, fold) cell; writes folds.csv, means.csv and comparison.txt when out_dir is set.
experiment_result run_experiment(const experiment_spec &spec, execution exec = execution::parallel);

void write_fold_csv(std::ostream &out, const experiment_result &result);
void write_means_csv(std::ostream &out, const experiment_result &result);
void write_comparison(std::ostream &out, const comparison_matrix &m, const std::string &metric, double alpha = 0.1);

}  // namespace dcc
