#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dcc/rng.hpp"

namespace dcc {

/// Chain order: position -> label, plus the inverse label -> position.
class label_permutation {
  public:
    label_permutation() = default;

    /// Throws argument_error unless `order` is a bijection of {0..L-1}.
    explicit label_permutation(std::vector<std::size_t> order);

    static label_permutation identity(std::size_t l);
    static label_permutation random(std::size_t l, rng_seed seed);

    [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
    /// Label decided at chain position `pos`.
    [[nodiscard]] std::size_t operator[](std::size_t pos) const noexcept { return order_[pos]; }
    /// Chain position of `label`.
    [[nodiscard]] std::size_t position_of(std::size_t label) const noexcept { return inverse_[label]; }

    [[nodiscard]] const std::vector<std::size_t> &order() const noexcept { return order_; }
    [[nodiscard]] const std::vector<std::size_t> &inverse() const noexcept { return inverse_; }

    bool operator==(const label_permutation &) const = default;

  private:
    std::vector<std::size_t> order_;
    std::vector<std::size_t> inverse_;
};

}  // namespace dcc
