#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/permutation.hpp"
#include "dcc/prediction.hpp"
#include "dcc/preprocess.hpp"

namespace dcc {

inline constexpr double variance_floor = 1e-9;

struct gaussian_estimator {
    double mean{0.0};
    double variance{1.0};

    [[nodiscard]] double log_density(double x) const noexcept;
};

/// Conditioned training problem for one label: its (undersampled) rows and selected features.
struct label_problem {
    label_view view;
    feature_subset subset;
};

/**
 * Order-free Naive Bayes chain.
 *
 * Every term a chain of any order can ask for is fitted up front:
 *  - priors[i][y]                 = P(Y_i = y)
 *  - likelihoods[i][y][k]         = P(X_{subsets[i].indices[k]} | Y_i = y)
 *  - conditionals[i * L + l][y]   = P(Y_l = 1 | Y_i = y), l != i
 * Each label's terms are fitted on that label's conditioned view. Diagonal
 * conditional entries are unused and hold NaN.
 */
struct nb_chain_model {
    std::size_t label_count{0};
    std::size_t feature_count{0};
    double smoothing{1.0};
    std::vector<std::array<double, 2>> priors;
    std::vector<feature_subset> subsets;
    std::vector<std::array<std::vector<gaussian_estimator>, 2>> likelihoods;
    std::vector<std::array<double, 2>> conditionals;

    [[nodiscard]] double conditional(std::size_t i, std::size_t l, std::size_t y) const noexcept {
        return conditionals[i * label_count + l][y];
    }
    [[nodiscard]] bool conditional_valid(std::size_t i, std::size_t l) const noexcept;

    [[nodiscard]] std::size_t prior_entry_count() const noexcept;
    [[nodiscard]] std::size_t gaussian_count() const noexcept;
    [[nodiscard]] std::size_t valid_conditional_count() const noexcept;

    /// Exact comparison; the NaN diagonal compares equal to itself.
    bool operator==(const nb_chain_model &other) const;
};

/// Fits all estimators once. `problems[i]` must target label i.
nb_chain_model train_nb(const multi_label_dataset &train, std::span<const label_problem> problems,
                        double smoothing = 1.0);

/// log P(Y_i = y) + sum_k log P(x_k | Y_i = y) over label i's selected features.
std::vector<std::array<double, 2>> feature_log_terms(const nb_chain_model &model, std::span<const double> x);

/// Greedy chain inference in the order `pi` without refitting anything.
prediction predict_chain_nb(const nb_chain_model &model, std::span<const double> x, const label_permutation &pi);

/// Binary relevance decision: prior and feature likelihoods only.
prediction predict_br_nb(const nb_chain_model &model, std::span<const double> x);

/// Text format, version 1; the record layout is described in README.md.
void save_nb(std::ostream &out, const nb_chain_model &model);
nb_chain_model load_nb(std::istream &in);

}  // namespace dcc
