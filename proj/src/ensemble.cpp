#include "dcc/ensemble.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dcc/errors.hpp"
#include "dcc/kv.hpp"
#include "dcc/preprocess.hpp"
#include "dcc/tuning.hpp"

namespace dcc {

namespace {

enum seed_tag : std::uint64_t { bag_tag = 1, split_tag, undersample_tag, select_tag, order_tag };

template <typename... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

label_matrix br_decisions(const std::variant<nb_chain_model, knn_chain_model> &model, const feature_matrix &x,
                          std::size_t label_count, execution exec) {
    label_matrix out(x.rows(), label_count);
    for_each_index(x.rows(), exec, [&](std::size_t i) {
        const auto p = std::visit(overloaded{[&](const nb_chain_model &m) { return predict_br_nb(m, x.row(i)); },
                                             [&](const knn_chain_model &m) { return predict_br_knn(m, x.row(i)); }},
                                  model);
        std::copy(p.hard.begin(), p.hard.end(), out.row(i).begin());
    });
    return out;
}

std::string join_names(const std::vector<std::string> &names) {
    std::string s;
    for (std::size_t i = 0; i < names.size(); ++i) {
        s += (i > 0 ? "," : "") + names[i];
    }
    return s;
}

std::string join_indices(const std::vector<std::size_t> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i > 0 ? " " : "") + std::to_string(v[i]);
    }
    return s;
}

template <typename T>
void write_row(std::ostream &out, std::span<const T> row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i > 0 ? " " : "");
        if constexpr (std::is_floating_point_v<T>) {
            out << format_double(row[i]);
        } else {
            out << static_cast<unsigned>(row[i]);
        }
    }
    out << '\n';
}

void write_member(std::ostream &out, const ensemble_member &m) {
    out << "dcc-member 1\n";
    out << "means ";
    write_row<double>(out, m.standardization.means);
    out << "stddevs ";
    write_row<double>(out, m.standardization.stddevs);
    out << "order ";
    write_row<std::size_t>(out, m.order.order());
    const auto &c = m.cache;
    out << "validation " << c.size() << ' ' << c.features.cols() << ' ' << c.label_count() << '\n';
    for (std::size_t i = 0; i < c.size(); ++i) {
        write_row<double>(out, c.features.row(i));
        write_row<std::uint8_t>(out, c.labels.row(i));
        write_row<std::uint8_t>(out, c.br_predictions.row(i));
    }
}

template <typename T>
void read_values(std::istream &in, std::span<T> out) {
    for (auto &v : out) {
        if constexpr (std::is_floating_point_v<T>) {
            in >> v;
        } else {
            unsigned x = 0;
            in >> x;
            if (x > 1) {
                throw parse_error("member file: label value out of range");
            }
            v = static_cast<T>(x);
        }
    }
    if (!in) {
        throw parse_error("member file: truncated");
    }
}

void read_member(std::istream &in, ensemble_member &m, std::size_t d, std::size_t L) {
    std::string key;
    int version = 0;
    if (!(in >> key >> version) || key != "dcc-member" || version != 1) {
        throw parse_error("member file: bad header");
    }
    m.standardization.means.resize(d);
    m.standardization.stddevs.resize(d);
    if (!(in >> key) || key != "means") {
        throw parse_error("member file: missing means");
    }
    read_values<double>(in, m.standardization.means);
    if (!(in >> key) || key != "stddevs") {
        throw parse_error("member file: missing stddevs");
    }
    read_values<double>(in, m.standardization.stddevs);
    if (!(in >> key) || key != "order") {
        throw parse_error("member file: missing order");
    }
    std::vector<std::size_t> order(L);
    for (auto &o : order) {
        in >> o;
    }
    m.order = label_permutation{std::move(order)};
    std::size_t n = 0;
    std::size_t cd = 0;
    std::size_t cl = 0;
    if (!(in >> key >> n >> cd >> cl) || key != "validation" || cd != d || cl != L) {
        throw parse_error("member file: bad validation header");
    }
    feature_matrix f(n, d);
    label_matrix y(n, L);
    label_matrix br(n, L);
    for (std::size_t i = 0; i < n; ++i) {
        read_values<double>(in, f.row(i));
        read_values<std::uint8_t>(in, y.row(i));
        read_values<std::uint8_t>(in, br.row(i));
    }
    m.cache = validation_cache{std::move(f), std::move(y), std::move(br)};
}

}  // namespace

std::string to_string(base_classifier b) { return b == base_classifier::naive_bayes ? "nb" : "knn"; }

std::string to_string(ordering_policy o) {
    switch (o) {
    case ordering_policy::dynamic:
        return "dynamic";
    case ordering_policy::random:
        return "random";
    case ordering_policy::fixed:
        return "fixed";
    case ordering_policy::binary_relevance:
        return "br";
    }
    return "?";
}

base_classifier parse_base(const std::string &s) {
    if (s == "nb") {
        return base_classifier::naive_bayes;
    }
    if (s == "knn") {
        return base_classifier::nearest_neighbour;
    }
    throw argument_error("unknown base classifier '" + s + "' (expected nb or knn)");
}

ordering_policy parse_ordering(const std::string &s) {
    if (s == "dynamic") {
        return ordering_policy::dynamic;
    }
    if (s == "random" || s == "ecc") {
        return ordering_policy::random;
    }
    if (s == "fixed") {
        return ordering_policy::fixed;
    }
    if (s == "br") {
        return ordering_policy::binary_relevance;
    }
    throw argument_error("unknown ordering '" + s + "' (expected dynamic, random, fixed or br)");
}

void ensemble_config::validate(std::size_t label_count) const {
    if (k == 0) {
        throw argument_error("ensemble size must be at least 1");
    }
    if (!(bag_fraction > 0.0 && bag_fraction <= 1.0)) {
        throw argument_error("bag fraction must lie in (0,1]");
    }
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
        throw argument_error("split ratio must lie in (0,1)");
    }
    if (!(max_ir >= 1.0)) {
        throw argument_error("max imbalance ratio must be >= 1");
    }
    if (feature_cap == 0) {
        throw argument_error("feature cap must be positive");
    }
    if (beta && !(*beta > 0.0)) {
        throw argument_error("beta must be positive");
    }
    if (r && *r == 0) {
        throw argument_error("neighbour count must be positive");
    }
    if (ordering == ordering_policy::fixed && !fixed_order.empty()) {
        if (fixed_order.size() != label_count) {
            throw argument_error("fixed order must list all " + std::to_string(label_count) + " labels");
        }
        label_permutation check{fixed_order};
    }
}

ensemble_member build_member(const multi_label_dataset &train, const ensemble_config &config, std::size_t r,
                             rng_seed member_seed, execution exec) {
    const std::size_t L = train.num_labels();
    const auto bag = bag_sample(train, config.bag_fraction, derive(member_seed, {bag_tag}));
    if (bag.num_rows() < 2) {
        throw training_error("bag of " + std::to_string(bag.num_rows()) + " rows is too small to split");
    }
    auto [scaled, params] = standardize(bag);
    const auto split = split_train_validation(scaled, config.split_ratio, derive(member_seed, {split_tag}));
    const auto &fit_part = split.train_part;
    const auto &valid_part = split.validation_part;

    ensemble_member member;
    member.standardization = std::move(params);
    if (config.base == base_classifier::naive_bayes) {
        std::vector<label_problem> problems;
        problems.reserve(L);
        for (std::size_t i = 0; i < L; ++i) {
            const auto view = undersample(fit_part, label_view::all_rows(fit_part, i), config.max_ir,
                                          derive(member_seed, {undersample_tag, i}));
            auto subset = select_features(fit_part, view, config.feature_cap, derive(member_seed, {select_tag, i}));
            problems.push_back({view, std::move(subset)});
        }
        member.model = train_nb(fit_part, problems, config.smoothing);
    } else {
        member.model = knn_chain_model{fit_part.features(), fit_part.labels(), std::min(r, fit_part.num_rows())};
    }
    auto br = br_decisions(member.model, valid_part.features(), L, exec);
    member.cache = validation_cache{valid_part.features(), valid_part.labels(), std::move(br)};

    switch (config.ordering) {
    case ordering_policy::random:
        member.order = label_permutation::random(L, derive(member_seed, {order_tag}));
        break;
    case ordering_policy::fixed:
        member.order =
            config.fixed_order.empty() ? label_permutation::identity(L) : label_permutation{config.fixed_order};
        break;
    default:
        member.order = label_permutation::identity(L);
        break;
    }
    return member;
}

label_permutation member_order(const ensemble_member &member, ordering_policy ordering, double beta,
                               std::span<const double> standardized_x) {
    if (ordering == ordering_policy::dynamic) {
        return dynamic_permutation(member.cache, standardized_x, beta);
    }
    return member.order;
}

std::vector<std::uint8_t> predict_member(const ensemble_member &member, ordering_policy ordering, double beta,
                                         std::span<const double> x) {
    std::vector<double> z(x.size());
    apply_standardization(x, member.standardization, z);
    if (ordering == ordering_policy::binary_relevance) {
        return std::visit(overloaded{[&](const nb_chain_model &m) { return predict_br_nb(m, z).hard; },
                                     [&](const knn_chain_model &m) { return predict_br_knn(m, z).hard; }},
                          member.model);
    }
    const auto pi = member_order(member, ordering, beta, z);
    return std::visit(overloaded{[&](const nb_chain_model &m) { return predict_chain_nb(m, z, pi).hard; },
                                 [&](const knn_chain_model &m) { return predict_chain_knn(m, z, pi).hard; }},
                      member.model);
}

ensemble build_ensemble(const multi_label_dataset &train, const ensemble_config &config, execution exec) {
    config.validate(train.num_labels());
    ensemble ens;
    ens.config = config;
    ens.feature_names = train.feature_names();
    ens.label_names = train.label_names();

    auto resolved = config;
    if (config.base == base_classifier::nearest_neighbour) {
        resolved.r = config.r ? *config.r : tune_r(train, config, default_r_grid(), exec);
    }
    if (config.ordering == ordering_policy::dynamic && !config.beta) {
        resolved.beta = tune_beta(train, resolved, default_beta_grid(), exec);
    }
    ens.beta = resolved.beta.value_or(1.0);
    ens.r = resolved.r.value_or(1);

    ens.members.resize(config.k);
    for_each_index(config.k, exec, [&](std::size_t m) {
        try {
            ens.members[m] = build_member(train, resolved, ens.r, derive(config.seed, {m}), execution::serial);
        } catch (const std::exception &e) {
            throw training_error("member " + std::to_string(m) + ": " + e.what());
        }
    });
    // tuned values are recorded so a reload predicts identically
    ens.config.beta = ens.beta;
    ens.config.r = ens.r;
    return ens;
}

std::uint8_t majority_vote(std::size_t positives, std::size_t k) {
    return static_cast<double>(positives) / static_cast<double>(k) > 0.5 ? 1 : 0;
}

prediction predict_ensemble(const ensemble &ens, std::span<const double> x) {
    if (x.size() != ens.feature_count()) {
        throw argument_error("expected " + std::to_string(ens.feature_count()) + " features, got " +
                             std::to_string(x.size()));
    }
    const std::size_t L = ens.label_count();
    std::vector<std::size_t> votes(L, 0);
    for (const auto &m : ens.members) {
        const auto h = predict_member(m, ens.config.ordering, ens.beta, x);
        for (std::size_t i = 0; i < L; ++i) {
            votes[i] += h[i];
        }
    }
    const std::size_t k = ens.members.size();
    prediction out{std::vector<std::uint8_t>(L), std::vector<double>(L), {}};
    for (std::size_t i = 0; i < L; ++i) {
        out.hard[i] = majority_vote(votes[i], k);
        out.scores[i] = static_cast<double>(votes[i]) / static_cast<double>(k);
    }
    return out;
}

label_matrix predict_ensemble_batch(const ensemble &ens, const feature_matrix &x, execution exec) {
    label_matrix out(x.rows(), ens.label_count());
    for_each_index(x.rows(), exec, [&](std::size_t i) {
        const auto p = predict_ensemble(ens, x.row(i));
        std::copy(p.hard.begin(), p.hard.end(), out.row(i).begin());
    });
    return out;
}

void save_ensemble(const std::filesystem::path &dir, const ensemble &ens) {
    std::filesystem::create_directories(dir);
    const auto &c = ens.config;
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest) {
        throw error("cannot write manifest in '" + dir.string() + "'");
    }
    manifest << "# dcc-ensemble 1\n";
    manifest << "format = 1\n";
    manifest << "k = " << c.k << '\n';
    manifest << "base = " << to_string(c.base) << '\n';
    manifest << "ordering = " << to_string(c.ordering) << '\n';
    manifest << "fixed_order = " << join_indices(c.fixed_order) << '\n';
    manifest << "beta = " << format_double(ens.beta) << '\n';
    manifest << "r = " << ens.r << '\n';
    manifest << "bag_fraction = " << format_double(c.bag_fraction) << '\n';
    manifest << "split_ratio = " << format_double(c.split_ratio) << '\n';
    manifest << "max_ir = " << format_double(c.max_ir) << '\n';
    manifest << "feature_cap = " << c.feature_cap << '\n';
    manifest << "smoothing = " << format_double(c.smoothing) << '\n';
    manifest << "seed = " << c.seed.value << '\n';
    manifest << "feature_names = " << join_names(ens.feature_names) << '\n';
    manifest << "label_names = " << join_names(ens.label_names) << '\n';
    for (std::size_t m = 0; m < ens.members.size(); ++m) {
        char name[32];
        std::snprintf(name, sizeof name, "member_%03zu", m);
        manifest << "member = " << name << '\n';
        const auto &member = ens.members[m];
        std::ofstream model_out(dir / (std::string(name) + ".model"));
        std::visit(overloaded{[&](const nb_chain_model &nb) { save_nb(model_out, nb); },
                              [&](const knn_chain_model &knn) { save_knn(model_out, knn); }},
                   member.model);
        std::ofstream member_out(dir / (std::string(name) + ".member"));
        write_member(member_out, member);
        if (!model_out || !member_out) {
            throw error("failed writing member " + std::to_string(m));
        }
    }
}

ensemble load_ensemble(const std::filesystem::path &dir) {
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest) {
        throw parse_error("cannot open manifest in '" + dir.string() + "'");
    }
    ensemble ens;
    auto &c = ens.config;
    std::vector<std::string> member_names;
    try {
        for (const auto &[key, value] : read_key_values(manifest)) {
            if (key == "format") {
                if (value != "1") {
                    throw parse_error("unsupported ensemble format " + value);
                }
            } else if (key == "k") {
                c.k = std::stoul(value);
            } else if (key == "base") {
                c.base = parse_base(value);
            } else if (key == "ordering") {
                c.ordering = parse_ordering(value);
            } else if (key == "fixed_order") {
                c.fixed_order.clear();
                std::istringstream is(value);
                std::size_t v = 0;
                while (is >> v) {
                    c.fixed_order.push_back(v);
                }
            } else if (key == "beta") {
                ens.beta = std::stod(value);
            } else if (key == "r") {
                ens.r = std::stoul(value);
            } else if (key == "bag_fraction") {
                c.bag_fraction = std::stod(value);
            } else if (key == "split_ratio") {
                c.split_ratio = std::stod(value);
            } else if (key == "max_ir") {
                c.max_ir = std::stod(value);
            } else if (key == "feature_cap") {
                c.feature_cap = std::stoul(value);
            } else if (key == "smoothing") {
                c.smoothing = std::stod(value);
            } else if (key == "seed") {
                c.seed.value = std::stoull(value);
            } else if (key == "feature_names") {
                ens.feature_names = split(value, ',');
            } else if (key == "label_names") {
                ens.label_names = split(value, ',');
            } else if (key == "member") {
                member_names.push_back(value);
            } else {
                throw parse_error("unknown manifest key '" + key + "'");
            }
        }
    } catch (const std::invalid_argument &) {
        throw parse_error("malformed number in manifest");
    } catch (const std::out_of_range &) {
        throw parse_error("number out of range in manifest");
    }
    c.beta = ens.beta;
    c.r = ens.r;
    if (member_names.size() != c.k) {
        throw parse_error("manifest lists " + std::to_string(member_names.size()) + " members, k = " +
                          std::to_string(c.k));
    }
    const std::size_t d = ens.feature_names.size();
    const std::size_t L = ens.label_names.size();
    for (const auto &name : member_names) {
        ensemble_member member;
        std::ifstream model_in(dir / (name + ".model"));
        std::ifstream member_in(dir / (name + ".member"));
        if (!model_in || !member_in) {
            throw parse_error("missing files for " + name);
        }
        if (c.base == base_classifier::naive_bayes) {
            member.model = load_nb(model_in);
        } else {
            member.model = load_knn(model_in);
        }
        read_member(member_in, member, d, L);
        ens.members.push_back(std::move(member));
    }
    return ens;
}

}  // namespace dcc
