#include "dcc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dcc/errors.hpp"
#include "dcc/kv.hpp"

namespace dcc {

namespace {

std::string sanitize(std::string s) {
    std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
    return s;
}

std::size_t parse_count(const std::string &key, const std::string &value) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return static_cast<std::size_t>(v);
    } catch (const std::logic_error &) {
        throw parse_error("'" + key + "' expects a non-negative integer, got '" + value + "'");
    }
}

double parse_real(const std::string &key, const std::string &value) {
    try {
        std::size_t pos = 0;
        const auto v = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::logic_error &) {
        throw parse_error("'" + key + "' expects a number, got '" + value + "'");
    }
}

}  // namespace

std::string algorithm_spec::name() const { return to_string(base) + "-" + to_string(ordering); }

algorithm_spec algorithm_spec::parse(const std::string &s) {
    const auto sep = s.find_first_of(":-");
    if (sep == std::string::npos) {
        throw argument_error("algorithm '" + s + "' must look like base:ordering, e.g. nb:dynamic");
    }
    return {parse_base(s.substr(0, sep)), parse_ordering(s.substr(sep + 1))};
}

void experiment_spec::validate() const {
    if (datasets.empty()) {
        throw argument_error("experiment lists no dataset");
    }
    if (algorithms.empty()) {
        throw argument_error("experiment lists no algorithm");
    }
    if (folds < 2) {
        throw argument_error("experiment needs at least 2 folds");
    }
}

experiment_spec parse_experiment_spec(std::istream &in, const std::filesystem::path &base_dir) {
    experiment_spec spec;
    auto &c = spec.config;
    for (const auto &[key, value] : read_key_values(in)) {
        if (key == "dataset") {
            const auto colon = value.rfind(':');
            if (colon == std::string::npos) {
                throw parse_error("dataset entry must be 'path : label_count'");
            }
            // split() also trims the surrounding whitespace
            dataset_spec ds;
            ds.path = split(value.substr(0, colon), '\n').front();
            if (ds.path.is_relative() && !base_dir.empty()) {
                ds.path = base_dir / ds.path;
            }
            ds.label_count = parse_count(key, split(value.substr(colon + 1), '\n').front());
            ds.name = ds.path.stem().string();
            spec.datasets.push_back(std::move(ds));
        } else if (key == "algorithm") {
            spec.algorithms.push_back(algorithm_spec::parse(value));
        } else if (key == "folds") {
            spec.folds = parse_count(key, value);
        } else if (key == "k") {
            c.k = parse_count(key, value);
        } else if (key == "beta") {
            c.beta = value == "tune" ? std::nullopt : std::optional<double>(parse_real(key, value));
        } else if (key == "r") {
            c.r = value == "tune" ? std::nullopt : std::optional<std::size_t>(parse_count(key, value));
        } else if (key == "bag_fraction") {
            c.bag_fraction = parse_real(key, value);
        } else if (key == "split_ratio") {
            c.split_ratio = parse_real(key, value);
        } else if (key == "max_ir") {
            c.max_ir = parse_real(key, value);
        } else if (key == "feature_cap") {
            c.feature_cap = parse_count(key, value);
        } else if (key == "smoothing") {
            c.smoothing = parse_real(key, value);
        } else if (key == "fixed_order") {
            c.fixed_order.clear();
            for (const auto &p : split(value, ',')) {
                c.fixed_order.push_back(parse_count(key, p));
            }
        } else if (key == "seed") {
            spec.seed.value = parse_count(key, value);
        } else if (key == "out") {
            spec.out_dir = value;
            if (spec.out_dir.is_relative() && !base_dir.empty()) {
                spec.out_dir = base_dir / spec.out_dir;
            }
        } else {
            throw parse_error("unknown experiment key '" + key + "'");
        }
    }
    c.seed = spec.seed;
    spec.validate();
    return spec;
}

experiment_spec load_experiment_spec(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open experiment spec '" + path.string() + "'");
    }
    return parse_experiment_spec(in, path.parent_path());
}

ensemble build_cell_ensemble(const multi_label_dataset &train, const algorithm_spec &algorithm,
                             const ensemble_config &config, rng_seed cell_seed, execution exec) {
    auto cfg = config;
    cfg.base = algorithm.base;
    cfg.ordering = algorithm.ordering;
    cfg.seed = cell_seed;
    return build_ensemble(train, cfg, exec);
}

evaluation_report run_cell(const multi_label_dataset &train, const multi_label_dataset &test,
                           const algorithm_spec &algorithm, const ensemble_config &config, rng_seed cell_seed,
                           execution exec) {
    const auto [train_std, params] = standardize(train);
    const auto test_std = apply_standardization(test, params);
    const auto ens = build_cell_ensemble(train_std, algorithm, config, cell_seed, exec);
    const auto pred = predict_ensemble_batch(ens, test_std.features(), exec);
    return evaluate(test_std.labels(), pred);
}

namespace {

evaluation_report mean_report(const std::vector<const evaluation_report *> &reports) {
    evaluation_report mean;
    std::array<double, 11> acc{};
    for (const auto *r : reports) {
        const auto v = metric_values(*r);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += v[i];
        }
        if (mean.support.empty()) {
            mean.support.resize(r->support.size());
        }
        for (std::size_t l = 0; l < r->support.size(); ++l) {
            mean.support[l].tp += r->support[l].tp;
            mean.support[l].fp += r->support[l].fp;
            mean.support[l].fn += r->support[l].fn;
            mean.support[l].tn += r->support[l].tn;
        }
    }
    const auto n = static_cast<double>(reports.size());
    double *fields[] = {&mean.hamming,   &mean.zero_one,      &mean.ex_fdr,    &mean.ex_fnr,
                        &mean.ex_f1_loss, &mean.macro_fdr,    &mean.macro_fnr, &mean.macro_f1_loss,
                        &mean.micro_fdr,  &mean.micro_fnr,    &mean.micro_f1_loss};
    for (std::size_t i = 0; i < acc.size(); ++i) {
        *fields[i] = acc[i] / n;
    }
    return mean;
}

}  // namespace

evaluation_report cross_validate(const multi_label_dataset &ds, const algorithm_spec &algorithm,
                                 const ensemble_config &config, std::size_t folds, rng_seed seed, execution exec) {
    const auto parts = kfold(ds, folds, derive(seed, {0}));
    std::vector<evaluation_report> reports(parts.size());
    for_each_index(parts.size(), exec, [&](std::size_t f) {
        reports[f] = run_cell(parts[f].train_part, parts[f].validation_part, algorithm, config, derive(seed, {1, f}),
                              execution::serial);
    });
    std::vector<const evaluation_report *> ptrs;
    for (const auto &r : reports) {
        ptrs.push_back(&r);
    }
    return mean_report(ptrs);
}

experiment_result run_experiment(const experiment_spec &spec, execution exec) {
    spec.validate();
    const std::size_t n_ds = spec.datasets.size();
    const std::size_t n_alg = spec.algorithms.size();
    const std::size_t n_fold = spec.folds;

    experiment_result result;
    result.cells.resize(n_ds * n_alg * n_fold);
    const auto cell_index = [&](std::size_t d, std::size_t a, std::size_t f) { return (d * n_alg + a) * n_fold + f; };

    struct loaded {
        std::optional<std::vector<split_pair>> folds;
        std::string error;
    };
    std::vector<loaded> data(n_ds);
    for (std::size_t d = 0; d < n_ds; ++d) {
        try {
            const auto ds = load_csv(spec.datasets[d].path, spec.datasets[d].label_count);
            data[d].folds = kfold(ds, n_fold, derive(spec.seed, {d}));
        } catch (const std::exception &e) {
            data[d].error = e.what();
        }
        for (std::size_t a = 0; a < n_alg; ++a) {
            for (std::size_t f = 0; f < n_fold; ++f) {
                auto &cell = result.cells[cell_index(d, a, f)];
                cell.dataset = spec.datasets[d].name;
                cell.algorithm = spec.algorithms[a].name();
                cell.fold = f;
                if (!data[d].folds) {
                    cell.error = "dataset: " + data[d].error;
                }
            }
        }
    }

    for_each_index(result.cells.size(), exec, [&](std::size_t idx) {
        const std::size_t d = idx / (n_alg * n_fold);
        const std::size_t a = (idx / n_fold) % n_alg;
        const std::size_t f = idx % n_fold;
        auto &cell = result.cells[idx];
        if (!data[d].folds) {
            return;
        }
        const auto &part = (*data[d].folds)[f];
        try {
            // algorithms share the cell seed so they see the same bags and splits
            cell.report = run_cell(part.train_part, part.validation_part, spec.algorithms[a], spec.config,
                                   derive(spec.seed, {d, f}), execution::serial);
        } catch (const std::exception &e) {
            cell.error = e.what();
        }
    });

    result.comparisons.resize(metric_names.size());
    for (std::size_t m = 0; m < metric_names.size(); ++m) {
        auto &cmp = result.comparisons[m];
        cmp.scores = matrix<double>(n_alg, n_ds, std::numeric_limits<double>::quiet_NaN());
        for (const auto &a : spec.algorithms) {
            cmp.algorithm_names.push_back(a.name());
        }
        for (const auto &d : spec.datasets) {
            cmp.dataset_names.push_back(d.name);
        }
    }
    for (std::size_t d = 0; d < n_ds; ++d) {
        for (std::size_t a = 0; a < n_alg; ++a) {
            std::vector<const evaluation_report *> ok;
            for (std::size_t f = 0; f < n_fold; ++f) {
                const auto &cell = result.cells[cell_index(d, a, f)];
                if (cell.report) {
                    ok.push_back(&*cell.report);
                }
            }
            if (ok.empty()) {
                continue;
            }
            const auto values = metric_values(mean_report(ok));
            for (std::size_t m = 0; m < metric_names.size(); ++m) {
                result.comparisons[m].scores(a, d) = values[m];
            }
        }
    }

    if (!spec.out_dir.empty()) {
        std::filesystem::create_directories(spec.out_dir);
        std::ofstream folds_out(spec.out_dir / "folds.csv");
        write_fold_csv(folds_out, result);
        std::ofstream means_out(spec.out_dir / "means.csv");
        write_means_csv(means_out, result);
        std::ofstream cmp_out(spec.out_dir / "comparison.txt");
        for (std::size_t m = 0; m < metric_names.size(); ++m) {
            write_comparison(cmp_out, result.comparisons[m], std::string(metric_names[m]));
        }
        if (!folds_out || !means_out || !cmp_out) {
            throw error("failed writing reports to '" + spec.out_dir.string() + "'");
        }
    }
    return result;
}

void write_fold_csv(std::ostream &out, const experiment_result &result) {
    out << "dataset,algorithm,fold,status";
    for (const auto name : metric_names) {
        out << ',' << name;
    }
    out << '\n';
    for (const auto &cell : result.cells) {
        out << cell.dataset << ',' << cell.algorithm << ',' << cell.fold << ','
            << (cell.report ? std::string("ok") : "error: " + sanitize(cell.error));
        for (std::size_t m = 0; m < metric_names.size(); ++m) {
            out << ',';
            if (cell.report) {
                out << format_double(metric_values(*cell.report)[m]);
            }
        }
        out << '\n';
    }
}

void write_means_csv(std::ostream &out, const experiment_result &result) {
    out << "dataset,algorithm,folds_ok,folds_failed";
    for (const auto name : metric_names) {
        out << ',' << name;
    }
    out << '\n';
    if (result.comparisons.empty()) {
        return;
    }
    const auto &first = result.comparisons.front();
    for (std::size_t d = 0; d < first.dataset_names.size(); ++d) {
        for (std::size_t a = 0; a < first.algorithm_names.size(); ++a) {
            std::size_t ok = 0;
            std::size_t failed = 0;
            for (const auto &cell : result.cells) {
                if (cell.dataset == first.dataset_names[d] && cell.algorithm == first.algorithm_names[a]) {
                    (cell.report ? ok : failed) += 1;
                }
            }
            out << first.dataset_names[d] << ',' << first.algorithm_names[a] << ',' << ok << ',' << failed;
            for (const auto &cmp : result.comparisons) {
                const double v = cmp.scores(a, d);
                out << ',' << (std::isnan(v) ? std::string{} : format_double(v));
            }
            out << '\n';
        }
    }
}

void write_comparison(std::ostream &out, const comparison_matrix &m, const std::string &metric, double alpha) {
    const std::size_t A = m.scores.rows();
    const std::size_t D = m.scores.cols();
    out << "== " << metric << " (" << A << " algorithms x " << D << " datasets) ==\n";
    for (std::size_t a = 0; a < A; ++a) {
        out << m.algorithm_names[a];
        for (std::size_t d = 0; d < D; ++d) {
            out << ' ' << format_double(m.scores(a, d));
        }
        out << '\n';
    }
    if (std::any_of(m.scores.data().begin(), m.scores.data().end(), [](double v) { return std::isnan(v); })) {
        out << "statistics skipped: missing cells\n\n";
        return;
    }
    if (A >= 3) {
        try {
            const auto fr = friedman_nemenyi(m, alpha);
            out << "friedman statistic " << format_double(fr.statistic) << " p " << format_double(fr.p_value)
                << " nemenyi_cd " << format_double(fr.critical_distance) << '\n';
            for (std::size_t a = 0; a < A; ++a) {
                out << "avg_rank " << m.algorithm_names[a] << ' ' << format_double(fr.average_ranks[a]) << '\n';
            }
        } catch (const error &e) {
            out << "friedman: " << e.what() << '\n';
        }
    }
    // first algorithm against each of the others, Holm-adjusted
    std::vector<double> raw;
    std::vector<std::string> lines;
    for (std::size_t a = 1; a < A; ++a) {
        try {
            const auto w = wilcoxon_signed_rank(m.scores.row(0), m.scores.row(a));
            raw.push_back(w.p_value);
            lines.push_back(m.algorithm_names[0] + " vs " + m.algorithm_names[a] + " W " + format_double(w.statistic) +
                            " p " + format_double(w.p_value));
        } catch (const error &e) {
            out << "wilcoxon " << m.algorithm_names[0] << " vs " << m.algorithm_names[a] << ": " << e.what() << '\n';
        }
    }
    const auto adjusted = holm_adjust(raw);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out << "wilcoxon " << lines[i] << " holm_p " << format_double(adjusted[i]) << '\n';
    }
    out << '\n';
}

}  // namespace dcc
