#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dcc/nb_chain.hpp"
#include "dcc/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dcc;

namespace {

multi_label_dataset make(std::size_t n, std::size_t d, std::size_t l, std::vector<double> x, std::vector<std::uint8_t> y) {
    feature_matrix fx(n, d);
    fx.data() = std::move(x);
    label_matrix fy(n, l);
    fy.data() = std::move(y);
    return {std::move(fx), std::move(fy)};
}

double linear_density(const gaussian_estimator &g, double x) {
    return std::exp(-(x - g.mean) * (x - g.mean) / (2.0 * g.variance)) / std::sqrt(2.0 * std::numbers::pi * g.variance);
}

}  // namespace

TEST_CASE("estimator budget for L=3, four features per label") {
    const auto ds = generate({.n = 60, .d = 4, .l = 3, .dependence = 0.5, .seed = {1}});
    const auto problems = fixture::full_problems(ds);
    const auto m = train_nb(ds, problems);
    CHECK(m.gaussian_count() == 24);
    CHECK(m.prior_entry_count() == 6);
    CHECK(m.valid_conditional_count() == 12);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK_FALSE(m.conditional_valid(i, i));
        CHECK(m.priors[i][0] + m.priors[i][1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hand moments and Laplace prior") {
    // label 0 positive on rows 0..2; feature 0 takes {1,3} on two of them
    const auto ds = make(10, 1, 1, {1, 3, 2, 0, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 0, 0, 0, 0, 0, 0, 0});
    const auto m = train_nb(ds, fixture::full_problems(ds));
    CHECK(m.priors[0][1] == doctest::Approx(4.0 / 12.0).epsilon(1e-12));
    CHECK(m.likelihoods[0][1][0].mean == doctest::Approx(2.0));
    CHECK(m.likelihoods[0][1][0].variance == doctest::Approx(2.0 / 3.0));

    const auto pair = make(2, 1, 1, {1, 3}, {1, 1});
    const auto m2 = train_nb(pair, fixture::full_problems(pair));
    CHECK(m2.likelihoods[0][1][0].mean == 2.0);
    CHECK(m2.likelihoods[0][1][0].variance == 1.0);
}

TEST_CASE("reordering matches a retrained chain for all 120 orders of 5 labels") {
    const auto ds = generate({.n = 200, .d = 6, .l = 5, .dependence = 0.7, .noise = 0.1, .seed = {42}});
    const auto problems = fixture::conditioned_problems(ds, 1.0, {3});
    const auto model = train_nb(ds, problems);
    const auto queries = generate({.n = 10, .d = 6, .l = 5, .dependence = 0.7, .noise = 0.1, .seed = {43}});
    for (const auto &pi : fixture::all_permutations(5)) {
        for (std::size_t q = 0; q < queries.num_rows(); ++q) {
            const auto x = queries.features().row(q);
            const auto got = predict_chain_nb(model, x, pi);
            const auto want = oracle::retrained_nb_chain(ds, problems, 1.0, x, pi);
            CHECK(got.hard == want.hard);
            for (std::size_t l = 0; l < 5; ++l) {
                CHECK(std::abs(got.log_posteriors[l][0] - want.log_posteriors[l][0]) <= 1e-9);
                CHECK(std::abs(got.log_posteriors[l][1] - want.log_posteriors[l][1]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("reordering matches a retrained chain on random orders of 10 labels") {
    const auto ds = generate({.n = 300, .d = 12, .l = 10, .dependence = 0.6, .noise = 0.05, .seed = {8}});
    const auto problems = fixture::conditioned_problems(ds, 1.5, {2});
    const auto model = train_nb(ds, problems);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto pi = label_permutation::random(10, {s});
        const auto x = ds.features().row(s);
        const auto got = predict_chain_nb(model, x, pi);
        const auto want = oracle::retrained_nb_chain(ds, problems, 1.0, x, pi);
        CHECK(got.hard == want.hard);
        for (std::size_t l = 0; l < 10; ++l) {
            CHECK(got.log_posteriors[l][1] == doctest::Approx(want.log_posteriors[l][1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("a copied label follows the decision made before it") {
    // y1 == y0; feature 0 separates the classes, feature 1 carries no signal
    std::vector<double> x;
    std::vector<std::uint8_t> y;
    for (int i = 0; i < 10; ++i) {
        const std::uint8_t c = i < 5 ? 1 : 0;
        x.push_back(c == 1 ? 2.0 + 0.1 * i : -2.0 - 0.1 * i);
        x.push_back(static_cast<double>(i % 5));
        y.push_back(c);
        y.push_back(c);
    }
    const auto ds = make(10, 2, 2, x, y);
    std::vector<label_problem> problems{{label_view::all_rows(ds, 0), {{0}, 0}},
                                        {label_view::all_rows(ds, 1), {{1}, 1}}};
    const auto m = train_nb(ds, problems);
    const std::vector<double> q{2.2, 2.0};
    const auto br = predict_br_nb(m, q);
    CHECK(br.hard[0] == 1);
    CHECK(br.hard[1] == 0);  // exact tie on its own
    const auto chain = predict_chain_nb(m, q, label_permutation({0, 1}));
    CHECK(chain.hard[0] == 1);
    CHECK(chain.hard[1] == 1);
    CHECK(m.conditional(1, 0, 1) == doctest::Approx(6.0 / 7.0));
    CHECK(m.conditional(1, 0, 0) == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("binary relevance decisions and the tie rule") {
    SUBCASE("prior dominates equal likelihoods") {
        // feature identical across classes, 4 positives of 5 with smoothing 1 -> 5/7
        const auto ds = make(10, 1, 1, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, {1, 1, 1, 1, 1, 1, 1, 1, 0, 0});
        auto m = train_nb(ds, fixture::full_problems(ds));
        m.priors[0] = {0.2, 0.8};
        m.likelihoods[0][1] = m.likelihoods[0][0];
        CHECK(predict_br_nb(m, std::vector<double>{0.3}).hard[0] == 1);
    }
    SUBCASE("symmetric model ties to 0") {
        const auto ds = make(4, 1, 1, {0, 1, 0, 1}, {1, 1, 0, 0});
        const auto m = train_nb(ds, fixture::full_problems(ds));
        const auto p = predict_br_nb(m, std::vector<double>{0.5});
        CHECK(p.hard[0] == 0);
        CHECK(p.scores[0] == 0.5);
    }
}

TEST_CASE("single label chain equals binary relevance") {
    const auto ds = generate({.n = 80, .d = 5, .l = 1, .noise = 0.1, .seed = {4}});
    const auto m = train_nb(ds, fixture::conditioned_problems(ds, 20.0, {1}));
    for (std::size_t q = 0; q < ds.num_rows(); ++q) {
        const auto x = ds.features().row(q);
        const auto a = predict_chain_nb(m, x, label_permutation::identity(1));
        const auto b = predict_br_nb(m, x);
        CHECK(a.hard == b.hard);
        CHECK(a.scores == b.scores);
    }
}

TEST_CASE("log-space and linear-space evaluation agree") {
    const auto ds = generate({.n = 120, .d = 3, .l = 4, .dependence = 0.6, .noise = 0.1, .seed = {6}});
    const auto m = train_nb(ds, fixture::full_problems(ds));
    for (std::uint64_t s = 0; s < 24; ++s) {
        const auto pi = label_permutation::random(4, {s});
        for (std::size_t q = 0; q < 20; ++q) {
            const auto x = ds.features().row(q);
            const auto p = predict_chain_nb(m, x, pi);
            std::vector<std::uint8_t> lin(4, 0);
            for (std::size_t pos = 0; pos < 4; ++pos) {
                const auto t = pi[pos];
                std::array<double, 2> v{};
                for (std::size_t y = 0; y < 2; ++y) {
                    v[y] = m.priors[t][y];
                    for (std::size_t k = 0; k < m.subsets[t].indices.size(); ++k) {
                        v[y] *= linear_density(m.likelihoods[t][y][k], x[m.subsets[t].indices[k]]);
                    }
                    for (std::size_t before = 0; before < pos; ++before) {
                        const auto e = pi[before];
                        const double p1 = m.conditional(t, e, y);
                        v[y] *= lin[e] == 1 ? p1 : 1.0 - p1;
                    }
                }
                REQUIRE(v[0] > 0.0);
                lin[t] = v[1] > v[0] ? 1 : 0;
            }
            CHECK(lin == p.hard);
            for (const auto sc : p.scores) {
                CHECK(std::isfinite(sc));
                CHECK(sc >= 0.0);
                CHECK(sc <= 1.0);
            }
        }
    }
}

TEST_CASE("estimator budget sweep") {
    for (std::size_t l = 1; l <= 8; ++l) {
        const auto ds = generate({.n = 100, .d = 2 + l, .l = l, .dependence = 0.5, .noise = 0.1, .seed = {l}});
        const auto problems = fixture::conditioned_problems(ds, 20.0, {l});
        const auto m = train_nb(ds, problems);
        std::size_t sum_d = 0;
        for (const auto &p : problems) {
            sum_d += p.subset.indices.size();
        }
        CHECK(m.valid_conditional_count() == 2 * l * (l - 1));
        CHECK(m.prior_entry_count() == 2 * l);
        CHECK(m.gaussian_count() == 2 * sum_d);
    }
}

TEST_CASE("save and load round trip") {
    const auto ds = generate({.n = 90, .d = 7, .l = 4, .dependence = 0.5, .noise = 0.1, .seed = {12}});
    const auto m = train_nb(ds, fixture::conditioned_problems(ds, 3.0, {5}));
    std::stringstream buf;
    save_nb(buf, m);
    const auto back = load_nb(buf);
    CHECK(back == m);
    const auto pi = label_permutation::random(4, {1});
    CHECK(predict_chain_nb(back, ds.features().row(3), pi).log_posteriors ==
          predict_chain_nb(m, ds.features().row(3), pi).log_posteriors);

    std::istringstream bad("dcc-nb-chain 9\n");
    CHECK_THROWS_AS((void)load_nb(bad), parse_error);
}

TEST_CASE("argument checks") {
    const auto ds = generate({.n = 30, .d = 3, .l = 2, .seed = {1}});
    const auto m = train_nb(ds, fixture::full_problems(ds));
    CHECK_THROWS_AS((void)predict_chain_nb(m, std::vector<double>{1.0}, label_permutation::identity(2)),
                    argument_error);
    CHECK_THROWS_AS((void)predict_chain_nb(m, ds.features().row(0), label_permutation::identity(3)),
                    argument_error);
    auto problems = fixture::full_problems(ds);
    problems.pop_back();
    CHECK_THROWS_AS((void)train_nb(ds, problems), argument_error);
}
