#include "dcc/knn_chain.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

constexpr const char *knn_magic = "dcc-knn-chain";

double squared_feature_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

void check_query(const knn_chain_model &model, std::span<const double> x) {
    if (x.size() != model.feature_count()) {
        throw argument_error("expected " + std::to_string(model.feature_count()) + " features, got " +
                             std::to_string(x.size()));
    }
}

/// The r smallest entries of `dist` by (distance, row index).
neighborhood select_nearest(std::span<const double> dist, std::size_t r) {
    std::vector<std::size_t> idx(dist.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const auto closer = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(r), idx.end(), closer);
    idx.resize(r);
    neighborhood nb;
    nb.distances.reserve(r);
    for (const auto i : idx) {
        nb.distances.push_back(dist[i]);
    }
    nb.member_rows = std::move(idx);
    return nb;
}

}  // namespace

knn_chain_model::knn_chain_model(feature_matrix f, label_matrix l, std::size_t neighbours)
    : features{std::move(f)}, labels{std::move(l)}, r{neighbours} {
    if (features.rows() != labels.rows() || features.rows() == 0) {
        throw argument_error("knn model needs non-empty, row-aligned feature and label matrices");
    }
    if (r == 0 || r > features.rows()) {
        throw argument_error("neighbour count " + std::to_string(r) + " must lie in [1, " +
                             std::to_string(features.rows()) + "]");
    }
}

double chain_distance(const label_permutation &pi, std::size_t step, std::span<const double> query_features,
                      std::span<const std::int8_t> query_labels, std::span<const double> train_features,
                      std::span<const std::uint8_t> train_labels) {
    if (step == 0 || step > pi.size()) {
        throw argument_error("chain step must lie in [1, L]");
    }
    if (query_features.size() != train_features.size()) {
        throw argument_error("feature dimension mismatch");
    }
    if (query_labels.size() != pi.size() || train_labels.size() != pi.size()) {
        throw argument_error("label dimension mismatch");
    }
    const double feature_part = squared_feature_distance(query_features, train_features);
    double label_part = 0.0;
    for (std::size_t pos = 0; pos + 1 < step; ++pos) {
        const auto label = pi[pos];
        if (query_labels[label] == undecided) {
            throw contract_error("label " + std::to_string(label) + " at chain position " + std::to_string(pos + 1) +
                                 " is undecided");
        }
        const double diff = static_cast<double>(query_labels[label]) - static_cast<double>(train_labels[label]);
        label_part += diff * diff;
    }
    return std::sqrt(feature_part + label_part);
}

neighborhood find_neighborhood(const knn_chain_model &model, const label_permutation &pi, std::size_t step,
                               std::span<const double> query_features, std::span<const std::int8_t> query_labels) {
    check_query(model, query_features);
    std::vector<double> dist(model.size());
    for (std::size_t n = 0; n < model.size(); ++n) {
        dist[n] = chain_distance(pi, step, query_features, query_labels, model.features.row(n), model.labels.row(n));
    }
    return select_nearest(dist, model.r);
}

prediction predict_chain_knn(const knn_chain_model &model, std::span<const double> x, const label_permutation &pi) {
    check_query(model, x);
    const std::size_t L = model.label_count();
    if (pi.size() != L) {
        throw argument_error("chain order has " + std::to_string(pi.size()) + " labels, model has " +
                             std::to_string(L));
    }
    const std::size_t n = model.size();
    // the feature part is shared by every step; label mismatches accumulate as decisions are made
    std::vector<double> feature_part(n);
    for (std::size_t i = 0; i < n; ++i) {
        feature_part[i] = squared_feature_distance(x, model.features.row(i));
    }
    std::vector<std::uint32_t> mismatches(n, 0);
    std::vector<double> dist(n);

    prediction out{std::vector<std::uint8_t>(L, 0), std::vector<double>(L, 0.0), {}};
    for (std::size_t pos = 0; pos < L; ++pos) {
        for (std::size_t i = 0; i < n; ++i) {
            dist[i] = std::sqrt(feature_part[i] + static_cast<double>(mismatches[i]));
        }
        const auto nb = select_nearest(dist, model.r);
        const std::size_t label = pi[pos];
        std::size_t positives = 0;
        for (const auto row : nb.member_rows) {
            positives += model.labels(row, label);
        }
        const double score = static_cast<double>(positives) / static_cast<double>(model.r);
        const std::uint8_t h = 2 * positives > model.r ? 1 : 0;
        out.scores[label] = score;
        out.hard[label] = h;
        for (std::size_t i = 0; i < n; ++i) {
            mismatches[i] += model.labels(i, label) != h ? 1U : 0U;
        }
    }
    return out;
}

prediction predict_br_knn(const knn_chain_model &model, std::span<const double> x) {
    check_query(model, x);
    const std::size_t L = model.label_count();
    std::vector<double> dist(model.size());
    for (std::size_t i = 0; i < model.size(); ++i) {
        dist[i] = std::sqrt(squared_feature_distance(x, model.features.row(i)));
    }
    const auto nb = select_nearest(dist, model.r);
    prediction out{std::vector<std::uint8_t>(L, 0), std::vector<double>(L, 0.0), {}};
    for (std::size_t l = 0; l < L; ++l) {
        std::size_t positives = 0;
        for (const auto row : nb.member_rows) {
            positives += model.labels(row, l);
        }
        out.scores[l] = static_cast<double>(positives) / static_cast<double>(model.r);
        out.hard[l] = 2 * positives > model.r ? 1 : 0;
    }
    return out;
}

void save_knn(std::ostream &out, const knn_chain_model &model, const std::vector<std::string> &feature_names,
              const std::vector<std::string> &label_names) {
    out << knn_magic << " 1 r=" << model.r << " labels=" << model.label_count() << '\n';
    const multi_label_dataset ds{model.features, model.labels, feature_names, label_names};
    write_csv(out, ds);
}

knn_chain_model load_knn(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("knn model: empty input");
    }
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    std::string r_field;
    std::string l_field;
    header >> magic >> version >> r_field >> l_field;
    if (magic != knn_magic || version != 1 || r_field.rfind("r=", 0) != 0 || l_field.rfind("labels=", 0) != 0) {
        throw parse_error("knn model: bad header line");
    }
    std::size_t r = 0;
    std::size_t labels = 0;
    try {
        r = std::stoul(r_field.substr(2));
        labels = std::stoul(l_field.substr(7));
    } catch (const std::exception &) {
        throw parse_error("knn model: bad header values");
    }
    auto ds = read_csv(in, labels);
    return {ds.features(), ds.labels(), r};
}

}  // namespace dcc
