// dcc: train, apply and benchmark dynamic classifier-chain ensembles.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dcc/dataset.hpp"
#include "dcc/ensemble.hpp"
#include "dcc/errors.hpp"
#include "dcc/harness.hpp"
#include "dcc/kv.hpp"
#include "dcc/metrics.hpp"
#include "dcc/stats.hpp"
#include "dcc/synth.hpp"

namespace {

enum exit_code : int { ok = 0, usage = 1, data = 2, internal = 3 };

struct model_flags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::optional<std::string> base;
    std::optional<std::string> ordering;
    std::optional<std::size_t> k;
    std::optional<std::string> beta;
    std::optional<std::string> r;
    std::optional<std::string> order;
};

void add_model_flags(CLI::App *cmd, model_flags &f, bool with_folds) {
    cmd->add_option("--seed", f.seed, "Random seed");
    if (with_folds) {
        cmd->add_option("--folds", f.folds, "Cross-validation folds")->check(CLI::Range(2, 1000000));
    }
    cmd->add_option("--base", f.base, "Base classifier")->check(CLI::IsMember({"nb", "knn"}));
    cmd->add_option("--ordering", f.ordering, "Chain ordering")->check(CLI::IsMember({"dynamic", "random", "fixed", "br"}));
    cmd->add_option("--k", f.k, "Ensemble size")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", f.beta, "Fuzzy neighbourhood width, or 'tune'");
    cmd->add_option("--r", f.r, "kNN neighbour count, or 'tune'");
    cmd->add_option("--order", f.order, "Comma-separated label order for --ordering fixed");
}

void apply_model_flags(const model_flags &f, dcc::ensemble_config &c) {
    if (f.seed) {
        c.seed = dcc::rng_seed{*f.seed};
    }
    if (f.base) {
        c.base = dcc::parse_base(*f.base);
    }
    if (f.ordering) {
        c.ordering = dcc::parse_ordering(*f.ordering);
    }
    if (f.k) {
        c.k = *f.k;
    }
    try {
        if (f.beta) {
            c.beta = *f.beta == "tune" ? std::nullopt : std::optional<double>(std::stod(*f.beta));
        }
        if (f.r) {
            c.r = *f.r == "tune" ? std::nullopt : std::optional<std::size_t>(std::stoul(*f.r));
        }
        if (f.order) {
            c.fixed_order.clear();
            for (const auto &s : dcc::split(*f.order, ',')) {
                c.fixed_order.push_back(std::stoul(s));
            }
        }
    } catch (const std::logic_error &) {
        throw dcc::argument_error("--beta, --r and --order take numbers (or 'tune')");
    }
}

template <typename F>
void with_output(const std::string &path, F &&write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw dcc::parse_error("cannot write '" + path + "'");
    }
    write(out);
    if (!out) {
        throw dcc::error("failed writing '" + path + "'");
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Dynamic classifier-chain ensembles for multi-label data"};
    app.require_subcommand(1);

    // train
    model_flags train_flags;
    std::string train_data;
    std::size_t train_labels = 0;
    std::string train_out;
    auto *train = app.add_subcommand("train", "Fit an ensemble and save it to a directory");
    train->add_option("--data", train_data, "Dataset CSV (features then labels)")->required();
    train->add_option("--labels", train_labels, "Number of trailing label columns")->required();
    train->add_option("--out", train_out, "Model directory")->required();
    add_model_flags(train, train_flags, false);

    // predict
    std::string predict_model;
    std::string predict_data;
    std::size_t predict_labels = 0;
    std::string predict_out;
    auto *predict = app.add_subcommand("predict", "Apply a saved ensemble; writes a label CSV");
    predict->add_option("--model", predict_model, "Model directory")->required();
    predict->add_option("--data", predict_data, "Feature CSV")->required();
    predict->add_option("--labels", predict_labels, "Trailing label columns to ignore in --data");
    predict->add_option("--out", predict_out, "Output CSV (default stdout)");

    // evaluate
    std::string eval_truth;
    std::string eval_pred;
    std::size_t eval_labels = 0;
    std::string eval_out;
    auto *evaluate = app.add_subcommand("evaluate", "Score predictions against the truth; writes JSON");
    evaluate->add_option("--truth", eval_truth, "Truth CSV")->required();
    evaluate->add_option("--pred", eval_pred, "Predicted label CSV")->required();
    evaluate->add_option("--labels", eval_labels, "Truth is a full dataset with this many trailing label columns");
    evaluate->add_option("--out", eval_out, "Output JSON (default stdout)");

    // benchmark
    model_flags bench_flags;
    std::string bench_spec;
    std::string bench_out;
    auto *benchmark = app.add_subcommand("benchmark", "Run a cross-validated experiment from a spec file");
    benchmark->add_option("spec", bench_spec, "Experiment spec file")->required();
    benchmark->add_option("--out", bench_out, "Report directory (overrides the spec)");
    add_model_flags(benchmark, bench_flags, true);

    // compare
    std::string cmp_means;
    std::string cmp_metric = "macro_f1_loss";
    double cmp_alpha = 0.1;
    std::string cmp_out;
    auto *compare = app.add_subcommand("compare", "Statistical comparison from a means.csv report");
    compare->add_option("means", cmp_means, "means.csv written by benchmark")->required();
    compare->add_option("--metric", cmp_metric, "Metric column, or 'all'");
    compare->add_option("--alpha", cmp_alpha, "Significance level")->check(CLI::IsMember({0.05, 0.1}));
    compare->add_option("--out", cmp_out, "Output file (default stdout)");

    // synth
    dcc::synth_spec synth_spec;
    std::uint64_t synth_seed = 0;
    std::string synth_out;
    auto *synth = app.add_subcommand("synth", "Generate a synthetic multi-label dataset CSV");
    synth->add_option("--n", synth_spec.n, "Rows")->check(CLI::PositiveNumber);
    synth->add_option("--d", synth_spec.d, "Features")->check(CLI::PositiveNumber);
    synth->add_option("--l", synth_spec.l, "Labels")->check(CLI::PositiveNumber);
    synth->add_option("--dependence", synth_spec.dependence, "Probability label j copies label j-1")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--noise", synth_spec.noise, "Label flip probability")->check(CLI::Range(0.0, 1.0));
    synth->add_option("--seed", synth_seed, "Random seed");
    synth->add_option("--out", synth_out, "Output CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*train) {
            dcc::ensemble_config config;
            apply_model_flags(train_flags, config);
            const auto ds = dcc::load_csv(train_data, train_labels);
            const auto ens = dcc::build_ensemble(ds, config);
            dcc::save_ensemble(train_out, ens);
            std::cerr << "trained " << ens.members.size() << " members (beta " << ens.beta << ", r " << ens.r
                      << ") -> " << train_out << '\n';
        } else if (*predict) {
            const auto ens = dcc::load_ensemble(predict_model);
            dcc::feature_matrix x;
            if (predict_labels > 0) {
                x = dcc::load_csv(predict_data, predict_labels).features();
            } else {
                x = dcc::load_feature_csv(predict_data);
            }
            if (x.cols() != ens.feature_count()) {
                throw dcc::validation_error("model expects " + std::to_string(ens.feature_count()) +
                                            " features, data has " + std::to_string(x.cols()));
            }
            const auto y = dcc::predict_ensemble_batch(ens, x, dcc::execution::parallel);
            with_output(predict_out, [&](std::ostream &out) { dcc::write_label_csv(out, y, ens.label_names); });
        } else if (*evaluate) {
            const auto truth = eval_labels > 0 ? dcc::load_csv(eval_truth, eval_labels).labels()
                                               : dcc::load_label_csv(eval_truth);
            const auto pred = dcc::load_label_csv(eval_pred);
            const auto report = dcc::evaluate(truth, pred);
            with_output(eval_out, [&](std::ostream &out) { out << dcc::to_json(report) << '\n'; });
        } else if (*benchmark) {
            auto spec = dcc::load_experiment_spec(bench_spec);
            apply_model_flags(bench_flags, spec.config);
            if (bench_flags.seed) {
                spec.seed = dcc::rng_seed{*bench_flags.seed};
            }
            if (bench_flags.folds) {
                spec.folds = *bench_flags.folds;
            }
            if (bench_flags.base || bench_flags.ordering) {
                spec.algorithms = {dcc::algorithm_spec{spec.config.base, spec.config.ordering}};
            }
            if (!bench_out.empty()) {
                spec.out_dir = bench_out;
            }
            const auto result = dcc::run_experiment(spec);
            std::size_t failed = 0;
            for (const auto &cell : result.cells) {
                if (!cell.report) {
                    ++failed;
                    std::cerr << "failed: " << cell.dataset << ' ' << cell.algorithm << " fold " << cell.fold
                              << ": " << cell.error << '\n';
                }
            }
            dcc::write_means_csv(std::cout, result);
            if (failed == result.cells.size()) {
                return data;
            }
        } else if (*compare) {
            with_output(cmp_out, [&](std::ostream &out) {
                if (cmp_metric == "all") {
                    for (const auto name : dcc::metric_names) {
                        const std::string metric(name);
                        dcc::write_comparison(out, dcc::load_comparison(cmp_means, metric), metric, cmp_alpha);
                    }
                } else {
                    dcc::write_comparison(out, dcc::load_comparison(cmp_means, cmp_metric), cmp_metric, cmp_alpha);
                }
            });
        } else if (*synth) {
            synth_spec.seed = dcc::rng_seed{synth_seed};
            const auto ds = dcc::generate(synth_spec);
            with_output(synth_out, [&](std::ostream &out) { dcc::write_csv(out, ds); });
        }
    } catch (const dcc::argument_error &e) {
        std::cerr << "dcc: " << e.what() << '\n';
        return usage;
    } catch (const dcc::parse_error &e) {
        std::cerr << "dcc: " << e.what() << '\n';
        return data;
    } catch (const dcc::validation_error &e) {
        std::cerr << "dcc: " << e.what() << '\n';
        return data;
    } catch (const dcc::insufficient_data_error &e) {
        std::cerr << "dcc: " << e.what() << '\n';
        return data;
    } catch (const std::exception &e) {
        std::cerr << "dcc: internal error: " << e.what() << '\n';
        return internal;
    }
    return ok;
}
