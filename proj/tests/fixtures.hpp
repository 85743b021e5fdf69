#pragma once

#include <algorithm>
#include <vector>

#include "dcc/nb_chain.hpp"
#include "dcc/preprocess.hpp"
#include "dcc/rng.hpp"
#include "dcc/synth.hpp"

namespace fixture {

/// Per-label conditioned views: undersampled to `max_ir`, features chosen by CFS.
inline std::vector<dcc::label_problem> conditioned_problems(const dcc::multi_label_dataset &ds, double max_ir,
                                                            dcc::rng_seed seed) {
    std::vector<dcc::label_problem> problems;
    for (std::size_t l = 0; l < ds.num_labels(); ++l) {
        auto view = dcc::undersample(ds, dcc::label_view::all_rows(ds, l), max_ir, dcc::derive(seed, {l, 0}));
        auto subset = dcc::select_features(ds, view, dcc::default_feature_cap, dcc::derive(seed, {l, 1}));
        problems.push_back({std::move(view), std::move(subset)});
    }
    return problems;
}

/// Every label sees every row and every feature.
inline std::vector<dcc::label_problem> full_problems(const dcc::multi_label_dataset &ds) {
    std::vector<dcc::label_problem> problems;
    std::vector<std::size_t> all(ds.num_features());
    for (std::size_t f = 0; f < all.size(); ++f) {
        all[f] = f;
    }
    for (std::size_t l = 0; l < ds.num_labels(); ++l) {
        problems.push_back({dcc::label_view::all_rows(ds, l), {all, l}});
    }
    return problems;
}

/// Every permutation of {0..l-1} in lexicographic order.
inline std::vector<dcc::label_permutation> all_permutations(std::size_t l) {
    std::vector<std::size_t> order(l);
    for (std::size_t i = 0; i < l; ++i) {
        order[i] = i;
    }
    std::vector<dcc::label_permutation> out;
    do {
        out.emplace_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

}  // namespace fixture
