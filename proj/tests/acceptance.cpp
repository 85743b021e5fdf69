// Acceptance suite: one PASS/FAIL line per criterion. Optional argv[1] is the
// dcc executable; the end-to-end criterion drives it when given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "dcc/dynamic_order.hpp"
#include "dcc/ensemble.hpp"
#include "dcc/harness.hpp"
#include "dcc/knn_chain.hpp"
#include "dcc/metrics.hpp"
#include "dcc/nb_chain.hpp"
#include "dcc/stats.hpp"
#include "dcc/synth.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dcc;
namespace fs = std::filesystem;

namespace {

struct outcome {
    bool pass{false};
    std::string detail;
};

struct criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<outcome()> run;
};

std::string fmt(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

outcome reorder_without_retrain() {
    const auto ds = generate({.n = 200, .d = 6, .l = 5, .dependence = 0.7, .noise = 0.1, .seed = {101}});
    const auto problems = fixture::conditioned_problems(ds, 1.0, {102});
    const auto model = train_nb(ds, problems);
    const auto queries = generate({.n = 40, .d = 6, .l = 5, .dependence = 0.7, .noise = 0.1, .seed = {103}});
    std::size_t checked = 0;
    std::size_t hard_mismatch = 0;
    double worst = 0.0;
    for (const auto &pi : fixture::all_permutations(5)) {
        for (std::size_t q = 0; q < queries.num_rows(); ++q) {
            const auto x = queries.features().row(q);
            const auto got = predict_chain_nb(model, x, pi);
            const auto want = oracle::retrained_nb_chain(ds, problems, 1.0, x, pi);
            hard_mismatch += got.hard != want.hard ? 1 : 0;
            for (std::size_t l = 0; l < 5; ++l) {
                for (std::size_t y = 0; y < 2; ++y) {
                    worst = std::max(worst, std::abs(got.log_posteriors[l][y] - want.log_posteriors[l][y]));
                }
            }
            ++checked;
        }
    }
    return {hard_mismatch == 0 && worst <= 1e-9,
            "120 orders x 40 queries, hard mismatches " + std::to_string(hard_mismatch) +
                ", max |log-posterior diff| " + fmt(worst, 3)};
}

outcome knn_oracle() {
    const auto train = generate({.n = 50, .d = 3, .l = 4, .dependence = 0.6, .noise = 0.15, .seed = {201}});
    const auto queries = generate({.n = 25, .d = 3, .l = 4, .dependence = 0.6, .noise = 0.15, .seed = {202}});
    std::size_t mismatches = 0;
    std::size_t checked = 0;
    for (const std::size_t r : {1, 3, 5, 4}) {
        const knn_chain_model model(train.features(), train.labels(), r);
        for (const auto &pi : fixture::all_permutations(4)) {
            for (std::size_t q = 0; q < queries.num_rows(); ++q) {
                const auto x = queries.features().row(q);
                const auto got = predict_chain_knn(model, x, pi);
                const auto want = oracle::full_sort_knn_chain(train.features(), train.labels(), r, x, pi);
                mismatches += (got.hard != want.hard || got.scores != want.scores) ? 1 : 0;
                ++checked;
            }
        }
    }
    return {mismatches == 0, "24 orders x 25 queries x 4 neighbour counts, mismatches " + std::to_string(mismatches) +
                                 " of " + std::to_string(checked)};
}

outcome estimator_budget() {
    std::size_t failures = 0;
    std::size_t cases = 0;
    for (std::size_t l = 1; l <= 8; ++l) {
        for (const std::size_t d : {1, 4, 12}) {
            const auto ds = generate({.n = 120, .d = d, .l = l, .dependence = 0.5, .noise = 0.1, .seed = {300 + l * 17 + d}});
            const auto problems = fixture::conditioned_problems(ds, 20.0, {l * 31 + d});
            const auto m = train_nb(ds, problems);
            std::size_t sum_d = 0;
            for (const auto &p : problems) {
                sum_d += p.subset.indices.size();
            }
            const bool ok = m.valid_conditional_count() == 2 * l * (l - 1) && m.prior_entry_count() == 2 * l &&
                            m.gaussian_count() == 2 * sum_d;
            failures += ok ? 0 : 1;
            ++cases;
        }
    }
    return {failures == 0, std::to_string(cases) + " (L, d) cases, failures " + std::to_string(failures)};
}

outcome crisp_reduction() {
    std::mt19937_64 eng(404);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + eng() % 60;
        const std::size_t l = 1 + eng() % 8;
        feature_matrix x(n, 4);
        label_matrix y(n, l);
        label_matrix h(n, l);
        for (auto &v : x.data()) {
            v = nd(eng);
        }
        for (std::size_t i = 0; i < y.data().size(); ++i) {
            y.data()[i] = static_cast<std::uint8_t>(eng() & 1U);
            h.data()[i] = static_cast<std::uint8_t>(eng() % 3 == 0 ? 1 - y.data()[i] : y.data()[i]);
        }
        const validation_cache cache(x, y, h);
        const std::vector<double> ones(n, 1.0);
        const std::vector<double> q{nd(eng), nd(eng), nd(eng), nd(eng)};
        const auto tiny_beta = local_f1_scores(cache, q, 1e-300);
        for (std::size_t j = 0; j < l; ++j) {
            const double want = oracle::crisp_f1(y, h, j);
            worst = std::max(worst, std::abs(local_f1(local_counts(cache, j, ones)) - want));
            worst = std::max(worst, std::abs(tiny_beta[j] - want));
        }
    }
    return {worst <= 1e-12, "100 fixtures, max |local F1 - crisp F1| " + fmt(worst, 3)};
}

outcome metric_oracle() {
    std::mt19937_64 eng(505);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + eng() % 40;
        const std::size_t l = 1 + eng() % 8;
        std::bernoulli_distribution bit(static_cast<double>(eng() % 101) / 100.0);
        label_matrix t(n, l);
        label_matrix p(n, l);
        for (std::size_t i = 0; i < t.data().size(); ++i) {
            t.data()[i] = bit(eng);
            p.data()[i] = eng() % 3 == 0 ? static_cast<std::uint8_t>(bit(eng)) : t.data()[i];
        }
        const auto got = metric_values(evaluate(t, p));
        const auto want = oracle::exact_metrics(t, p).values();
        for (std::size_t m = 0; m < got.size(); ++m) {
            worst = std::max(worst, std::abs(got[m] - oracle::to_double(want[m])));
        }
    }
    label_matrix t(1, 3);
    t.data() = {1, 0, 1};
    label_matrix p(1, 3);
    p.data() = {1, 1, 1};
    const auto r = evaluate(t, p);
    const bool hand = std::abs(r.hamming - 1.0 / 3.0) <= 1e-12 && r.zero_one == 1.0 &&
                      std::abs(r.ex_fdr - 1.0 / 3.0) <= 1e-12 && r.ex_fnr == 0.0 &&
                      std::abs(r.ex_f1_loss - 0.2) <= 1e-12;
    return {worst <= 1e-12 && hand, "1000 fixtures, max deviation " + fmt(worst, 3) + ", hand example " +
                                        (hand ? "ok" : "wrong")};
}

outcome vote_threshold() {
    // members whose prior forces a constant answer, mixed in every proportion
    const auto ds = generate({.n = 60, .d = 3, .l = 2, .dependence = 0.5, .seed = {606}});
    ensemble_config c;
    c.k = 1;
    c.ordering = ordering_policy::fixed;
    c.beta = 1.0;
    c.seed = {607};
    const auto base = build_ensemble(ds, c);
    const auto constant_member = [&](std::uint8_t v) {
        auto m = base.members[0];
        auto &nb = std::get<nb_chain_model>(m.model);
        for (std::size_t i = 0; i < nb.label_count; ++i) {
            nb.priors[i] = v == 1 ? std::array<double, 2>{1e-12, 1.0 - 1e-12} : std::array<double, 2>{1.0 - 1e-12, 1e-12};
            nb.likelihoods[i][1] = nb.likelihoods[i][0];
        }
        for (auto &cond : nb.conditionals) {
            if (!std::isnan(cond[0])) {
                cond = {0.5, 0.5};
            }
        }
        return m;
    };
    const auto yes = constant_member(1);
    const auto no = constant_member(0);
    std::size_t wrong = 0;
    for (std::size_t v = 0; v <= 20; ++v) {
        auto ens = base;
        ens.config.k = 20;
        ens.members.assign(v, yes);
        ens.members.insert(ens.members.end(), 20 - v, no);
        const auto p = predict_ensemble(ens, ds.features().row(0));
        const std::uint8_t expect = v >= 11 ? 1 : 0;
        for (std::size_t l = 0; l < 2; ++l) {
            wrong += (p.hard[l] != expect || majority_vote(v, 20) != expect) ? 1 : 0;
        }
    }
    return {wrong == 0, "vote counts 0..20, wrong decisions " + std::to_string(wrong)};
}

struct directional_data {
    std::vector<double> dynamic_fdr, random_fdr, cc_zero_one, br_zero_one;
};

const directional_data &directional_runs() {
    static const directional_data data = [] {
        directional_data d;
        constexpr std::size_t datasets = 20;
        d.dynamic_fdr.resize(datasets);
        d.random_fdr.resize(datasets);
        d.cc_zero_one.resize(datasets);
        d.br_zero_one.resize(datasets);
        ensemble_config config;  // K = 20, tuned beta
        for_each_index(datasets, execution::parallel, [&](std::size_t s) {
            const auto ds = generate({.n = 600, .d = 10, .l = 6, .dependence = 0.8, .noise = 0.1, .seed = {7000 + s}});
            const rng_seed cv{8000 + s};
            const auto run = [&](ordering_policy o) {
                return cross_validate(ds, {base_classifier::naive_bayes, o}, config, 10, cv, execution::serial);
            };
            d.dynamic_fdr[s] = run(ordering_policy::dynamic).macro_fdr;
            d.random_fdr[s] = run(ordering_policy::random).macro_fdr;
            d.cc_zero_one[s] = run(ordering_policy::fixed).zero_one;
            d.br_zero_one[s] = run(ordering_policy::binary_relevance).zero_one;
        });
        return d;
    }();
    return data;
}

double mean(const std::vector<double> &v) {
    double s = 0.0;
    for (const auto x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

std::string wilcoxon_text(const std::vector<double> &a, const std::vector<double> &b) {
    try {
        return fmt(wilcoxon_signed_rank(a, b).p_value);
    } catch (const error &e) {
        return std::string("n/a (") + e.what() + ")";
    }
}

outcome dynamic_vs_ecc_precision() {
    const auto &d = directional_runs();
    const double dyn = mean(d.dynamic_fdr);
    const double ecc = mean(d.random_fdr);
    return {dyn <= ecc, "mean macro-FDR dynamic " + fmt(dyn) + " vs random-order " + fmt(ecc) + ", Wilcoxon p " +
                            wilcoxon_text(d.dynamic_fdr, d.random_fdr)};
}

outcome chain_vs_br_subset_loss() {
    const auto &d = directional_runs();
    const double cc = mean(d.cc_zero_one);
    const double br = mean(d.br_zero_one);
    return {cc <= br, "mean zero-one loss fixed-order chain " + fmt(cc) + " vs binary relevance " + fmt(br) +
                          ", Wilcoxon p " + wilcoxon_text(d.cc_zero_one, d.br_zero_one)};
}

outcome statistics_fixtures() {
    const std::vector<double> a{0, 12, 13, 14, 15, 16, 17, 18, 19, 0};
    const std::vector<double> b{1, 10, 10, 10, 10, 10, 10, 10, 10, 10};
    const auto w = wilcoxon_signed_rank(a, b);
    const double reference = oracle::exact_wilcoxon_p(10, w.statistic);
    const bool wil = w.statistic == 11.0 && std::abs(w.p_value - reference) <= 1e-3;

    const auto holm = holm_adjust(std::vector<double>{0.01, 0.04});
    const bool holm_ok = holm == std::vector<double>{0.02, 0.04};

    comparison_matrix m;
    m.scores = matrix<double>(4, 8, 0.25);
    m.algorithm_names = {"a", "b", "c", "d"};
    for (int i = 0; i < 8; ++i) {
        m.dataset_names.push_back("ds" + std::to_string(i));
    }
    const auto fr = friedman_nemenyi(m);
    bool uniform = fr.p_value == 1.0;
    for (const auto r : fr.average_ranks) {
        uniform = uniform && r == 2.5;
    }
    return {wil && holm_ok && uniform, "Wilcoxon p " + fmt(w.p_value, 8) + " vs exact " + fmt(reference, 8) +
                                           ", Holm " + (holm_ok ? "ok" : "wrong") + ", all-tie Friedman " +
                                           (uniform ? "ok" : "wrong")};
}

outcome end_to_end(const std::string &cli) {
    const auto dir = fs::temp_directory_path() / "dcc_acceptance_e2e";
    fs::remove_all(dir);
    fs::create_directories(dir);
    save_csv(dir / "flags_like.csv",
             generate({.n = 194, .d = 43, .l = 7, .dependence = 0.5, .noise = 0.1, .seed = {1000}}));
    {
        std::ofstream spec(dir / "experiment.txt");
        spec << "dataset = flags_like.csv : 7\n"
                "algorithm = nb:dynamic\n"
                "folds = 10\n"
                "k = 20\n"
                "beta = tune\n"
                "seed = 2024\n";
    }
    const auto run = [&](const std::string &out) {
        if (!cli.empty()) {
            const std::string cmd = "\"" + cli + "\" benchmark \"" + (dir / "experiment.txt").string() + "\" --out \"" +
                                    (dir / out).string() + "\" > \"" + (dir / (out + ".log")).string() + "\" 2>&1";
            return std::system(cmd.c_str()) == 0;
        }
        auto spec = load_experiment_spec(dir / "experiment.txt");
        spec.out_dir = dir / out;
        const auto result = run_experiment(spec);
        return std::all_of(result.cells.begin(), result.cells.end(), [](const auto &c) { return c.report.has_value(); });
    };
    const auto t0 = std::chrono::steady_clock::now();
    const bool first = run("a");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool second = run("b");
    bool identical = first && second;
    for (const auto *name : {"folds.csv", "means.csv", "comparison.txt"}) {
        identical = identical && fs::exists(dir / "a" / name) && slurp(dir / "a" / name) == slurp(dir / "b" / name);
    }
    std::size_t ok_rows = 0;
    {
        std::istringstream folds(slurp(dir / "a" / "folds.csv"));
        std::string line;
        while (std::getline(folds, line)) {
            ok_rows += line.find(",ok,") != std::string::npos ? 1 : 0;
        }
    }
    const bool pass = identical && ok_rows == 10 && seconds < 300.0;
    if (pass) {
        fs::remove_all(dir);
    }
    return {pass, std::string(cli.empty() ? "library" : "cli") + " run " + fmt(seconds, 3) + " s, folds ok " +
                      std::to_string(ok_rows) + "/10, rerun " + (identical ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char **argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<criterion> criteria{
        {1, "reorder-without-retrain equivalence (NB, L=5, all 120 orders)", 30, reorder_without_retrain},
        {2, "kNN chain matches full-sort oracle (L=4, n=50, all 24 orders)", 10, knn_oracle},
        {3, "NB estimator budget for L in 1..8", 60, estimator_budget},
        {4, "crisp reduction of local F1", 60, crisp_reduction},
        {5, "metrics match exact rational oracle", 60, metric_oracle},
        {6, "strict majority vote threshold", 60, vote_threshold},
        {7, "dynamic ordering macro-FDR <= random-order ECC", 600, dynamic_vs_ecc_precision},
        {8, "fixed-order chain zero-one loss <= binary relevance", 600, chain_vs_br_subset_loss},
        {9, "statistics fixtures", 60, statistics_fixtures},
        {10, "benchmark end to end: Flags-shaped, K=20, 10 folds, deterministic", 300,
         [&] { return end_to_end(cli); }},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = s < c.budget_seconds;
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s [%2d] %s | %s | %.2f s (limit %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), s, c.budget_seconds, in_time ? "" : " OVER TIME");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
