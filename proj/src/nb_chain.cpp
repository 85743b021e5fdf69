#include "dcc/nb_chain.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

constexpr const char *nb_magic = "dcc-nb-chain";
constexpr int nb_version = 1;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double logistic_of_difference(double lp0, double lp1) {
    const double diff = lp1 - lp0;
    if (diff >= 0.0) {
        return 1.0 / (1.0 + std::exp(-diff));
    }
    const double e = std::exp(diff);
    return e / (1.0 + e);
}

gaussian_estimator fit_gaussian(const std::vector<double> &values) {
    gaussian_estimator g;
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (const auto v : values) {
        sum += v;
    }
    g.mean = sum / n;
    double ss = 0.0;
    for (const auto v : values) {
        ss += (v - g.mean) * (v - g.mean);
    }
    g.variance = std::max(ss / n, variance_floor);
    return g;
}

void check_dimension(const nb_chain_model &model, std::span<const double> x) {
    if (x.size() != model.feature_count) {
        throw argument_error("expected " + std::to_string(model.feature_count) + " features, got " +
                             std::to_string(x.size()));
    }
}

}  // namespace

double gaussian_estimator::log_density(double x) const noexcept {
    const double dev = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * variance) - dev * dev / (2.0 * variance);
}

bool nb_chain_model::conditional_valid(std::size_t i, std::size_t l) const noexcept {
    return i != l && !std::isnan(conditionals[i * label_count + l][0]) &&
           !std::isnan(conditionals[i * label_count + l][1]);
}

bool nb_chain_model::operator==(const nb_chain_model &other) const {
    const auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    if (label_count != other.label_count || feature_count != other.feature_count || smoothing != other.smoothing ||
        priors != other.priors || subsets != other.subsets ||
        conditionals.size() != other.conditionals.size() || likelihoods.size() != other.likelihoods.size()) {
        return false;
    }
    for (std::size_t i = 0; i < conditionals.size(); ++i) {
        if (!same(conditionals[i][0], other.conditionals[i][0]) || !same(conditionals[i][1], other.conditionals[i][1])) {
            return false;
        }
    }
    for (std::size_t i = 0; i < likelihoods.size(); ++i) {
        for (std::size_t y = 0; y < 2; ++y) {
            const auto &a = likelihoods[i][y];
            const auto &b = other.likelihoods[i][y];
            if (a.size() != b.size()) {
                return false;
            }
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (a[k].mean != b[k].mean || a[k].variance != b[k].variance) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::size_t nb_chain_model::prior_entry_count() const noexcept { return 2 * priors.size(); }

std::size_t nb_chain_model::gaussian_count() const noexcept {
    std::size_t n = 0;
    for (const auto &per_class : likelihoods) {
        n += per_class[0].size() + per_class[1].size();
    }
    return n;
}

std::size_t nb_chain_model::valid_conditional_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < label_count; ++i) {
        for (std::size_t l = 0; l < label_count; ++l) {
            if (conditional_valid(i, l)) {
                n += 2;
            }
        }
    }
    return n;
}

nb_chain_model train_nb(const multi_label_dataset &train, std::span<const label_problem> problems, double smoothing) {
    const std::size_t L = train.num_labels();
    if (problems.size() != L) {
        throw argument_error("expected one conditioned view per label (" + std::to_string(L) + "), got " +
                             std::to_string(problems.size()));
    }
    if (!(smoothing > 0.0)) {
        throw argument_error("smoothing must be positive");
    }
    nb_chain_model model;
    model.label_count = L;
    model.feature_count = train.num_features();
    model.smoothing = smoothing;
    model.priors.resize(L);
    model.subsets.resize(L);
    model.likelihoods.resize(L);
    model.conditionals.assign(L * L, {std::numeric_limits<double>::quiet_NaN(),
                                      std::numeric_limits<double>::quiet_NaN()});

    const auto &labels = train.labels();
    for (std::size_t i = 0; i < L; ++i) {
        const auto &[view, subset] = problems[i];
        if (view.label != i || subset.target_label != i) {
            throw argument_error("conditioned view " + std::to_string(i) + " targets another label");
        }
        if (view.size() == 0) {
            throw training_error("label '" + train.label_names()[i] + "' has an empty training view");
        }
        if (subset.indices.empty()) {
            throw training_error("label '" + train.label_names()[i] + "' has no selected features");
        }
        for (const auto f : subset.indices) {
            if (f >= train.num_features()) {
                throw argument_error("selected feature index out of range");
            }
        }
        model.subsets[i] = subset;

        std::array<double, 2> class_count{0.0, 0.0};
        for (const auto r : view.rows) {
            class_count[labels(r, i)] += 1.0;
        }
        const auto n = static_cast<double>(view.size());
        for (std::size_t y = 0; y < 2; ++y) {
            model.priors[i][y] = (class_count[y] + smoothing) / (n + 2.0 * smoothing);
        }

        // Gaussian per (class, selected feature). A class absent from the view
        // falls back to the pooled estimate, which leaves the decision to the prior.
        for (std::size_t y = 0; y < 2; ++y) {
            auto &estimators = model.likelihoods[i][y];
            estimators.reserve(subset.indices.size());
            for (const auto f : subset.indices) {
                std::vector<double> values;
                for (const auto r : view.rows) {
                    if (class_count[y] == 0.0 || labels(r, i) == y) {
                        values.push_back(train.features()(r, f));
                    }
                }
                estimators.push_back(fit_gaussian(values));
            }
        }

        for (std::size_t l = 0; l < L; ++l) {
            if (l == i) {
                continue;
            }
            std::array<double, 2> ones{0.0, 0.0};
            for (const auto r : view.rows) {
                ones[labels(r, i)] += labels(r, l);
            }
            for (std::size_t y = 0; y < 2; ++y) {
                model.conditionals[i * L + l][y] = (ones[y] + smoothing) / (class_count[y] + 2.0 * smoothing);
            }
        }
    }
    return model;
}

std::vector<std::array<double, 2>> feature_log_terms(const nb_chain_model &model, std::span<const double> x) {
    check_dimension(model, x);
    std::vector<std::array<double, 2>> terms(model.label_count);
    for (std::size_t i = 0; i < model.label_count; ++i) {
        const auto &idx = model.subsets[i].indices;
        for (std::size_t y = 0; y < 2; ++y) {
            double acc = std::log(model.priors[i][y]);
            const auto &est = model.likelihoods[i][y];
            for (std::size_t k = 0; k < idx.size(); ++k) {
                acc += est[k].log_density(x[idx[k]]);
            }
            terms[i][y] = acc;
        }
    }
    return terms;
}

prediction predict_chain_nb(const nb_chain_model &model, std::span<const double> x, const label_permutation &pi) {
    const std::size_t L = model.label_count;
    if (pi.size() != L) {
        throw argument_error("chain order has " + std::to_string(pi.size()) + " labels, model has " +
                             std::to_string(L));
    }
    // acc[j][y] starts as the order-free BR term and collects
    // log P(Y_decided = h | Y_j = y) for every label decided before j.
    auto acc = feature_log_terms(model, x);
    prediction out{std::vector<std::uint8_t>(L, 0), std::vector<double>(L, 0.0),
                   std::vector<std::array<double, 2>>(L)};
    for (std::size_t pos = 0; pos < L; ++pos) {
        const std::size_t label = pi[pos];
        const auto [lp0, lp1] = acc[label];
        const std::uint8_t h = lp1 > lp0 ? 1 : 0;
        out.hard[label] = h;
        out.scores[label] = logistic_of_difference(lp0, lp1);
        out.log_posteriors[label] = acc[label];
        for (std::size_t next = pos + 1; next < L; ++next) {
            const std::size_t j = pi[next];
            for (std::size_t y = 0; y < 2; ++y) {
                const double p1 = model.conditional(j, label, y);
                acc[j][y] += std::log(h == 1 ? p1 : 1.0 - p1);
            }
        }
    }
    return out;
}

prediction predict_br_nb(const nb_chain_model &model, std::span<const double> x) {
    const auto terms = feature_log_terms(model, x);
    const std::size_t L = model.label_count;
    prediction out{std::vector<std::uint8_t>(L, 0), std::vector<double>(L, 0.0), terms};
    for (std::size_t i = 0; i < L; ++i) {
        out.hard[i] = terms[i][1] > terms[i][0] ? 1 : 0;
        out.scores[i] = logistic_of_difference(terms[i][0], terms[i][1]);
    }
    return out;
}

void save_nb(std::ostream &out, const nb_chain_model &model) {
    const std::size_t L = model.label_count;
    out << nb_magic << ' ' << nb_version << '\n';
    out << "labels " << L << '\n';
    out << "features " << model.feature_count << '\n';
    out << "smoothing " << g17(model.smoothing) << '\n';
    for (std::size_t i = 0; i < L; ++i) {
        out << "prior " << i << ' ' << g17(model.priors[i][0]) << ' ' << g17(model.priors[i][1]) << '\n';
        out << "subset " << i << ' ' << model.subsets[i].indices.size();
        for (const auto f : model.subsets[i].indices) {
            out << ' ' << f;
        }
        out << '\n';
        for (std::size_t y = 0; y < 2; ++y) {
            const auto &est = model.likelihoods[i][y];
            for (std::size_t k = 0; k < est.size(); ++k) {
                out << "gauss " << i << ' ' << y << ' ' << model.subsets[i].indices[k] << ' ' << g17(est[k].mean)
                    << ' ' << g17(est[k].variance) << '\n';
            }
        }
    }
    for (std::size_t i = 0; i < L; ++i) {
        for (std::size_t l = 0; l < L; ++l) {
            if (model.conditional_valid(i, l)) {
                out << "cond " << i << ' ' << l << ' ' << g17(model.conditional(i, l, 0)) << ' '
                    << g17(model.conditional(i, l, 1)) << '\n';
            }
        }
    }
    out << "end\n";
}

nb_chain_model load_nb(std::istream &in) {
    const auto fail = [](const std::string &what) -> nb_chain_model { throw parse_error("nb model: " + what); };
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != nb_magic) {
        return fail("bad header");
    }
    if (version != nb_version) {
        return fail("unsupported version " + std::to_string(version));
    }
    nb_chain_model model;
    std::string key;
    if (!(in >> key >> model.label_count) || key != "labels" || model.label_count == 0) {
        return fail("missing label count");
    }
    if (!(in >> key >> model.feature_count) || key != "features") {
        return fail("missing feature count");
    }
    if (!(in >> key >> model.smoothing) || key != "smoothing") {
        return fail("missing smoothing");
    }
    const std::size_t L = model.label_count;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    model.priors.assign(L, {nan, nan});
    model.subsets.resize(L);
    model.likelihoods.resize(L);
    model.conditionals.assign(L * L, {nan, nan});

    while (in >> key && key != "end") {
        std::size_t i = 0;
        if (!(in >> i) || i >= L) {
            return fail("label index out of range in '" + key + "' record");
        }
        if (key == "prior") {
            in >> model.priors[i][0] >> model.priors[i][1];
        } else if (key == "subset") {
            std::size_t k = 0;
            in >> k;
            model.subsets[i].target_label = i;
            model.subsets[i].indices.resize(k);
            for (auto &f : model.subsets[i].indices) {
                in >> f;
                if (f >= model.feature_count) {
                    return fail("feature index out of range");
                }
            }
        } else if (key == "gauss") {
            std::size_t y = 0;
            std::size_t f = 0;
            gaussian_estimator g;
            in >> y >> f >> g.mean >> g.variance;
            if (y > 1) {
                return fail("class must be 0 or 1");
            }
            model.likelihoods[i][y].push_back(g);
        } else if (key == "cond") {
            std::size_t l = 0;
            in >> l;
            if (l >= L || l == i) {
                return fail("invalid conditional pair");
            }
            in >> model.conditionals[i * L + l][0] >> model.conditionals[i * L + l][1];
        } else {
            return fail("unknown record '" + key + "'");
        }
        if (!in) {
            return fail("truncated '" + key + "' record");
        }
    }
    if (key != "end") {
        return fail("missing end marker");
    }
    for (std::size_t i = 0; i < L; ++i) {
        if (std::isnan(model.priors[i][0]) || model.subsets[i].indices.empty() ||
            model.likelihoods[i][0].size() != model.subsets[i].indices.size() ||
            model.likelihoods[i][1].size() != model.subsets[i].indices.size()) {
            return fail("incomplete estimators for label " + std::to_string(i));
        }
        for (std::size_t l = 0; l < L; ++l) {
            if (l != i && !model.conditional_valid(i, l)) {
                return fail("missing conditional " + std::to_string(i) + "," + std::to_string(l));
            }
        }
    }
    return model;
}

}  // namespace dcc
