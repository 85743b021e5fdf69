#include "dcc/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "dcc/errors.hpp"

namespace dcc {

label_permutation::label_permutation(std::vector<std::size_t> order) : order_{std::move(order)} {
    inverse_.assign(order_.size(), order_.size());
    for (std::size_t pos = 0; pos < order_.size(); ++pos) {
        const auto label = order_[pos];
        if (label >= order_.size() || inverse_[label] != order_.size()) {
            throw argument_error("chain order is not a permutation of 0.." + std::to_string(order_.size() - 1));
        }
        inverse_[label] = pos;
    }
}

label_permutation label_permutation::identity(std::size_t l) {
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return label_permutation{std::move(order)};
}

label_permutation label_permutation::random(std::size_t l, rng_seed seed) {
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto eng = make_engine(seed);
    std::shuffle(order.begin(), order.end(), eng);
    return label_permutation{std::move(order)};
}

}  // namespace dcc
