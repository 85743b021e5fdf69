#include "dcc/dynamic_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

void check_beta(double beta) {
    if (!(beta > 0.0)) {
        throw argument_error("beta must be positive");
    }
}

void check_query(const validation_cache &cache, std::span<const double> query) {
    if (query.size() != cache.features.cols()) {
        throw argument_error("query has " + std::to_string(query.size()) + " features, validation set has " +
                             std::to_string(cache.features.cols()));
    }
}

}  // namespace

validation_cache::validation_cache(feature_matrix f, label_matrix l, label_matrix br)
    : features{std::move(f)}, labels{std::move(l)}, br_predictions{std::move(br)} {
    if (features.rows() != labels.rows() || labels.rows() != br_predictions.rows() ||
        labels.cols() != br_predictions.cols()) {
        throw argument_error("validation features, labels and BR predictions must be row-aligned");
    }
}

double membership(std::span<const double> query, std::span<const double> point, double beta) {
    if (query.size() != point.size()) {
        throw argument_error("membership: dimension mismatch");
    }
    check_beta(beta);
    return std::exp(-beta * squared_distance(query, point));
}

fuzzy_neighborhood neighborhood_of(const validation_cache &cache, std::span<const double> query, double beta) {
    check_query(cache, query);
    check_beta(beta);
    fuzzy_neighborhood nb{std::vector<double>(cache.size()), beta};
    for (std::size_t n = 0; n < cache.size(); ++n) {
        nb.memberships[n] = std::exp(-beta * squared_distance(query, cache.features.row(n)));
    }
    return nb;
}

confusion_mass local_counts(const validation_cache &cache, std::size_t l, std::span<const double> memberships) {
    if (l >= cache.label_count()) {
        throw argument_error("label index out of range");
    }
    if (memberships.size() != cache.size()) {
        throw argument_error("one membership per validation row expected");
    }
    confusion_mass c;
    for (std::size_t n = 0; n < cache.size(); ++n) {
        const bool truth = cache.labels(n, l) == 1;
        const bool decided = cache.br_predictions(n, l) == 1;
        if (truth && decided) {
            c.tp += memberships[n];
        } else if (decided) {
            c.fp += memberships[n];
        } else if (truth) {
            c.fn += memberships[n];
        }
    }
    return c;
}

confusion_mass local_counts(const validation_cache &cache, std::size_t l, std::span<const double> query, double beta) {
    const auto nb = neighborhood_of(cache, query, beta);
    return local_counts(cache, l, nb.memberships);
}

double local_f1(double tp, double fp, double fn) {
    const double denom = 2.0 * tp + fp + fn;
    return denom > 0.0 ? 2.0 * tp / denom : 0.0;
}

std::vector<double> local_f1_scores(const validation_cache &cache, std::span<const double> query, double beta) {
    check_query(cache, query);
    check_beta(beta);
    const std::size_t n = cache.size();
    std::vector<double> weights(n);
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = squared_distance(query, cache.features.row(i));
        nearest = std::min(nearest, weights[i]);
    }
    for (auto &w : weights) {
        w = std::exp(-beta * (w - nearest));
    }
    std::vector<double> f(cache.label_count());
    for (std::size_t l = 0; l < f.size(); ++l) {
        f[l] = local_f1(local_counts(cache, l, weights));
    }
    return f;
}

label_permutation order_by_scores(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return label_permutation{std::move(order)};
}

label_permutation dynamic_permutation(const validation_cache &cache, std::span<const double> query, double beta) {
    if (cache.label_count() == 0) {
        throw argument_error("validation cache has no labels");
    }
    const auto f = local_f1_scores(cache, query, beta);
    return order_by_scores(f);
}

}  // namespace dcc
