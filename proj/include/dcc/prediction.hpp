#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace dcc {

/// Per-label output of a chain or an ensemble.
struct prediction {
    /// Hard decisions in label order (not chain order).
    std::vector<std::uint8_t> hard;
    /// Relevance score per label in [0,1]; hard[i] == 1 iff the score wins under the model's tie rule.
    std::vector<double> scores;
    /// Unnormalised log posteriors {y=0, y=1} at decision time. Naive Bayes only.
    std::vector<std::array<double, 2>> log_posteriors;
};

}  // namespace dcc
