#pragma once

#include <cstddef>

#include "dcc/dataset.hpp"
#include "dcc/rng.hpp"

namespace dcc {

struct synth_spec {
    std::size_t n{100};
    std::size_t d{10};
    std::size_t l{5};
    /// Probability that label j copies label j-1.
    double dependence{0.0};
    /// Per-label flip probability applied after features are drawn.
    double noise{0.0};
    rng_seed seed{};
};

/// Gap between the two class means of every feature.
inline constexpr double synth_separation = 2.0;

/**
 * Chain-dependent labels with label-conditioned Gaussian features.
 *
 * Label 0 ~ Bernoulli(0.5); label j copies label j-1 with probability
 * `dependence`, else is a fresh Bernoulli(0.5). Feature f is normal with unit
 * variance and mean +-synth_separation/2 depending on label f mod l. Labels are
 * flipped with probability `noise` afterwards.
 */
multi_label_dataset generate(const synth_spec &spec);

}  // namespace dcc
