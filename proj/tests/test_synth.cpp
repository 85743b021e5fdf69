#include <doctest.h>

#include <cmath>

#include "dcc/preprocess.hpp"
#include "dcc/synth.hpp"

using namespace dcc;

namespace {

std::vector<double> label_column(const multi_label_dataset &ds, std::size_t l) {
    std::vector<double> out(ds.num_rows());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ds.labels()(i, l);
    }
    return out;
}

}  // namespace

TEST_CASE("full dependence without noise copies label 0") {
    const auto ds = generate({.n = 200, .d = 3, .l = 5, .dependence = 1.0, .noise = 0.0, .seed = {1}});
    for (std::size_t i = 0; i < ds.num_rows(); ++i) {
        for (std::size_t l = 1; l < 5; ++l) {
            CHECK(ds.labels()(i, l) == ds.labels()(i, 0));
        }
    }
}

TEST_CASE("independent labels are uncorrelated") {
    const auto ds = generate({.n = 5000, .d = 2, .l = 4, .dependence = 0.0, .noise = 0.0, .seed = {2}});
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            CHECK(std::abs(pearson(label_column(ds, a), label_column(ds, b))) < 0.1);
        }
    }
}

TEST_CASE("adjacent agreement rate tracks the dependence") {
    for (const double dep : {0.0, 0.3, 0.8}) {
        const std::size_t n = 5000;
        const auto ds = generate({.n = n, .d = 2, .l = 3, .dependence = dep, .noise = 0.0, .seed = {7}});
        const double p = dep + (1.0 - dep) / 2.0;
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        for (std::size_t l = 1; l < 3; ++l) {
            double agree = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                agree += ds.labels()(i, l) == ds.labels()(i, l - 1) ? 1.0 : 0.0;
            }
            CHECK(std::abs(agree / static_cast<double>(n) - p) <= 3.0 * se);
        }
    }
}

TEST_CASE("features follow their label") {
    const auto ds = generate({.n = 4000, .d = 4, .l = 2, .dependence = 0.0, .noise = 0.0, .seed = {3}});
    for (std::size_t f = 0; f < 4; ++f) {
        std::array<double, 2> sum{};
        std::array<double, 2> cnt{};
        for (std::size_t i = 0; i < ds.num_rows(); ++i) {
            const auto y = ds.labels()(i, f % 2);
            sum[y] += ds.features()(i, f);
            cnt[y] += 1.0;
        }
        CHECK(sum[1] / cnt[1] - sum[0] / cnt[0] == doctest::Approx(synth_separation).epsilon(0.1));
    }
}

TEST_CASE("deterministic and validated") {
    const synth_spec s{.n = 50, .d = 3, .l = 3, .dependence = 0.4, .noise = 0.2, .seed = {9}};
    CHECK(generate(s) == generate(s));
    auto other = s;
    other.seed = {10};
    CHECK_FALSE(generate(s) == generate(other));
    auto bad = s;
    bad.noise = 1.5;
    CHECK_THROWS_AS((void)generate(bad), argument_error);
    bad = s;
    bad.l = 0;
    CHECK_THROWS_AS((void)generate(bad), argument_error);
}
