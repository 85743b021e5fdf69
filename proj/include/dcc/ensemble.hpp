#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dcc/dataset.hpp"
#include "dcc/dynamic_order.hpp"
#include "dcc/kernels.hpp"
#include "dcc/knn_chain.hpp"
#include "dcc/nb_chain.hpp"
#include "dcc/permutation.hpp"
#include "dcc/prediction.hpp"
#include "dcc/rng.hpp"

namespace dcc {

enum class base_classifier { naive_bayes, nearest_neighbour };

/// How each member picks its chain order.
enum class ordering_policy {
    dynamic,           ///< per query, by descending local F1 on the member's validation part
    random,            ///< one random order per member, drawn at build time (ECC)
    fixed,             ///< the configured order for every member
    binary_relevance,  ///< no chaining at all
};

std::string to_string(base_classifier b);
std::string to_string(ordering_policy o);
base_classifier parse_base(const std::string &s);
ordering_policy parse_ordering(const std::string &s);

struct ensemble_config {
    std::size_t k{20};
    double bag_fraction{0.66};
    double split_ratio{0.6};
    double max_ir{20.0};
    std::size_t feature_cap{300};
    double smoothing{1.0};
    base_classifier base{base_classifier::naive_bayes};
    ordering_policy ordering{ordering_policy::dynamic};
    /// Used by ordering_policy::fixed; empty means the identity order.
    std::vector<std::size_t> fixed_order;
    /// Fuzzy neighbourhood width; nullopt means "tune".
    std::optional<double> beta{};
    /// Neighbour count for the kNN base; nullopt means "tune".
    std::optional<std::size_t> r{};
    rng_seed seed{};

    void validate(std::size_t label_count) const;

    bool operator==(const ensemble_config &) const = default;
};

/// One trained chain with everything it needs at prediction time.
struct ensemble_member {
    standardization_params standardization;
    std::variant<nb_chain_model, knn_chain_model> model;
    validation_cache cache;
    /// Build-time order (random and fixed policies).
    label_permutation order;

    bool operator==(const ensemble_member &) const = default;
};

struct ensemble {
    ensemble_config config;
    /// Resolved hyperparameters (after tuning).
    double beta{1.0};
    std::size_t r{1};
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;
    std::vector<ensemble_member> members;

    [[nodiscard]] std::size_t feature_count() const noexcept { return feature_names.size(); }
    [[nodiscard]] std::size_t label_count() const noexcept { return label_names.size(); }

    bool operator==(const ensemble &) const = default;
};

/**
 * Trains one member: bag -> standardize -> split into training and validation
 * parts -> per-label undersampling and feature selection (Naive Bayes) ->
 * fit -> binary relevance decisions on the validation part.
 */
ensemble_member build_member(const multi_label_dataset &train, const ensemble_config &config, std::size_t r,
                             rng_seed member_seed, execution exec = execution::serial);

/// Hard decisions of one member for a raw (unstandardized) input.
std::vector<std::uint8_t> predict_member(const ensemble_member &member, ordering_policy ordering, double beta,
                                         std::span<const double> x);

/// Chain order a member uses for `x` (already standardized).
label_permutation member_order(const ensemble_member &member, ordering_policy ordering, double beta,
                               std::span<const double> standardized_x);

/// Resolves "tune" hyperparameters, then trains config.k members.
ensemble build_ensemble(const multi_label_dataset &train, const ensemble_config &config,
                        execution exec = execution::parallel);

/// Strict majority of hard votes: positives / k > 0.5.
std::uint8_t majority_vote(std::size_t positives, std::size_t k);

/// Hard labels by majority vote; scores are the vote fractions.
prediction predict_ensemble(const ensemble &ens, std::span<const double> x);

/// Row-wise predict_ensemble over a raw feature matrix.
label_matrix predict_ensemble_batch(const ensemble &ens, const feature_matrix &x, execution exec);

/// Writes manifest.txt plus one model file and one member file per member.
void save_ensemble(const std::filesystem::path &dir, const ensemble &ens);
ensemble load_ensemble(const std::filesystem::path &dir);

}  // namespace dcc
