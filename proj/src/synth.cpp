#include "dcc/synth.hpp"

#include <random>

#include "dcc/errors.hpp"

namespace dcc {

multi_label_dataset generate(const synth_spec &spec) {
    if (spec.n == 0 || spec.d == 0 || spec.l == 0) {
        throw argument_error("synthetic data needs n, d, l >= 1");
    }
    const auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in_unit(spec.dependence) || !in_unit(spec.noise)) {
        throw argument_error("dependence and noise must lie in [0,1]");
    }
    auto eng = make_engine(spec.seed);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution copy(spec.dependence);
    std::bernoulli_distribution flip(spec.noise);
    std::normal_distribution<double> gauss(0.0, 1.0);

    feature_matrix x(spec.n, spec.d);
    label_matrix y(spec.n, spec.l);
    std::vector<std::uint8_t> clean(spec.l);
    for (std::size_t i = 0; i < spec.n; ++i) {
        clean[0] = coin(eng) ? 1 : 0;
        for (std::size_t j = 1; j < spec.l; ++j) {
            clean[j] = copy(eng) ? clean[j - 1] : (coin(eng) ? 1 : 0);
        }
        for (std::size_t f = 0; f < spec.d; ++f) {
            const double centre = (clean[f % spec.l] == 1 ? 0.5 : -0.5) * synth_separation;
            x(i, f) = centre + gauss(eng);
        }
        for (std::size_t j = 0; j < spec.l; ++j) {
            y(i, j) = flip(eng) ? static_cast<std::uint8_t>(1 - clean[j]) : clean[j];
        }
    }
    return {std::move(x), std::move(y)};
}

}  // namespace dcc
