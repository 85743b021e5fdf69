#include "dcc/tuning.hpp"

#include <algorithm>
#include <limits>

#include "dcc/errors.hpp"
#include "dcc/metrics.hpp"

namespace dcc {

namespace {

enum tuning_tag : std::uint64_t { beta_tag = 101, r_tag = 102 };

struct fold_member {
    ensemble_member member;
    multi_label_dataset test;
};

std::vector<fold_member> train_fold_members(const multi_label_dataset &train, const ensemble_config &config,
                                            std::size_t r, rng_seed seed) {
    if (train.num_rows() < tuning_folds) {
        throw training_error("tuning needs at least " + std::to_string(tuning_folds) + " rows, got " +
                             std::to_string(train.num_rows()));
    }
    const auto folds = kfold(train, tuning_folds, derive(seed, {0}));
    std::vector<fold_member> out;
    out.reserve(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        try {
            out.push_back({build_member(folds[f].train_part, config, r, derive(seed, {1, f})), folds[f].validation_part});
        } catch (const error &e) {
            throw training_error(std::string("tuning fold ") + std::to_string(f) + ": " + e.what());
        }
    }
    return out;
}

double macro_f1_loss_of(const ensemble_member &member, const multi_label_dataset &test, ordering_policy ordering,
                        double beta, execution exec) {
    label_matrix pred(test.num_rows(), test.num_labels());
    for_each_index(test.num_rows(), exec, [&](std::size_t i) {
        const auto h = predict_member(member, ordering, beta, test.features().row(i));
        std::copy(h.begin(), h.end(), pred.row(i).begin());
    });
    return evaluate(test.labels(), pred).macro_f1_loss;
}

std::size_t stored_rows(const ensemble_member &member) {
    return std::get<knn_chain_model>(member.model).size();
}

}  // namespace

std::vector<double> default_beta_grid() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<std::size_t> default_r_grid() { return {1, 3, 5, 7, 9, 11}; }

double tune_beta(const multi_label_dataset &train, const ensemble_config &config, const std::vector<double> &grid,
                 execution exec) {
    if (grid.empty()) {
        throw argument_error("empty beta grid");
    }
    if (grid.size() == 1) {
        return grid.front();
    }
    auto member_config = config;
    member_config.ordering = ordering_policy::dynamic;
    const auto members = train_fold_members(train, member_config, config.r.value_or(1), derive(config.seed, {beta_tag}));

    double best = grid.front();
    double best_loss = std::numeric_limits<double>::infinity();
    for (const auto beta : grid) {
        double loss = 0.0;
        for (const auto &fm : members) {
            loss += macro_f1_loss_of(fm.member, fm.test, ordering_policy::dynamic, beta, exec);
        }
        loss /= static_cast<double>(members.size());
        if (loss < best_loss || (loss == best_loss && beta < best)) {
            best_loss = loss;
            best = beta;
        }
    }
    return best;
}

std::size_t tune_r(const multi_label_dataset &train, const ensemble_config &config,
                   const std::vector<std::size_t> &grid, execution exec) {
    if (grid.empty()) {
        throw argument_error("empty neighbour grid");
    }
    if (config.base != base_classifier::nearest_neighbour) {
        throw argument_error("neighbour count tuning applies to the kNN base only");
    }
    const std::size_t largest = *std::max_element(grid.begin(), grid.end());
    auto members = train_fold_members(train, config, largest, derive(config.seed, {r_tag}));
    std::size_t capacity = std::numeric_limits<std::size_t>::max();
    for (const auto &fm : members) {
        capacity = std::min(capacity, stored_rows(fm.member));
    }
    const double beta = config.beta.value_or(1.0);

    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (const auto r : grid) {
        if (r == 0 || r > capacity) {
            continue;
        }
        double loss = 0.0;
        for (auto &fm : members) {
            auto &knn = std::get<knn_chain_model>(fm.member.model);
            knn.r = r;
            // binary relevance decisions on the validation part depend on r
            auto &cache = fm.member.cache;
            for (std::size_t i = 0; i < cache.size(); ++i) {
                const auto br = predict_br_knn(knn, cache.features.row(i));
                std::copy(br.hard.begin(), br.hard.end(), cache.br_predictions.row(i).begin());
            }
            loss += macro_f1_loss_of(fm.member, fm.test, config.ordering, beta, exec);
        }
        loss /= static_cast<double>(members.size());
        if (loss < best_loss || (loss == best_loss && r < best)) {
            best_loss = loss;
            best = r;
        }
    }
    if (best == 0) {
        throw training_error("no neighbour count candidate fits the tuning folds (" + std::to_string(capacity) +
                             " stored rows)");
    }
    return best;
}

}  // namespace dcc
