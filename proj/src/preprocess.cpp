#include "dcc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

/// Centered, unit-norm copy of `v`; all zeros for a constant column.
std::vector<double> unit_centered(std::vector<double> v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    if (constant) {
        std::fill(v.begin(), v.end(), 0.0);
        return v;
    }
    double ss = 0.0;
    for (auto &x : v) {
        x -= mean;
        ss += x * x;
    }
    const double norm = std::sqrt(ss);
    for (auto &x : v) {
        x /= norm;
    }
    return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

}  // namespace

label_view label_view::all_rows(const multi_label_dataset &ds, std::size_t label) {
    if (label >= ds.num_labels()) {
        throw argument_error("label index out of range");
    }
    label_view v{label, std::vector<std::size_t>(ds.num_rows())};
    std::iota(v.rows.begin(), v.rows.end(), std::size_t{0});
    return v;
}

label_view undersample(const multi_label_dataset &ds, const label_view &view, double max_ir, rng_seed seed) {
    if (!(max_ir >= 1.0)) {
        throw argument_error("max imbalance ratio must be >= 1");
    }
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < view.size(); ++i) {
        (view.target(ds, i) == 1 ? pos : neg).push_back(i);
    }
    auto &minority = pos.size() <= neg.size() ? pos : neg;
    auto &majority = pos.size() <= neg.size() ? neg : pos;
    if (minority.empty()) {
        return view;
    }
    const double ratio = static_cast<double>(majority.size()) / static_cast<double>(minority.size());
    if (ratio <= max_ir) {
        return view;
    }
    const auto keep = static_cast<std::size_t>(std::ceil(max_ir * static_cast<double>(minority.size())));

    auto eng = make_engine(seed);
    std::shuffle(majority.begin(), majority.end(), eng);
    majority.resize(keep);

    std::vector<std::size_t> kept;
    kept.reserve(minority.size() + majority.size());
    kept.insert(kept.end(), minority.begin(), minority.end());
    kept.insert(kept.end(), majority.begin(), majority.end());
    std::sort(kept.begin(), kept.end());

    label_view out{view.label, {}};
    out.rows.reserve(kept.size());
    for (const auto i : kept) {
        out.rows.push_back(view.rows[i]);
    }
    return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) {
        throw argument_error("correlation needs two equally long non-empty vectors");
    }
    const auto za = unit_centered({a.begin(), a.end()});
    const auto zb = unit_centered({b.begin(), b.end()});
    return dot(za, zb);
}

std::vector<std::size_t> cap_subset(std::vector<std::size_t> indices, std::size_t cap, rng_seed seed) {
    if (indices.size() > cap) {
        auto eng = make_engine(seed);
        std::shuffle(indices.begin(), indices.end(), eng);
        indices.resize(cap);
    }
    std::sort(indices.begin(), indices.end());
    return indices;
}

feature_subset select_features(const multi_label_dataset &ds, const label_view &view, std::size_t cap,
                               rng_seed seed) {
    if (cap == 0) {
        throw argument_error("feature cap must be positive");
    }
    if (view.size() == 0) {
        throw argument_error("feature selection on an empty view");
    }
    const std::size_t d = ds.num_features();
    const std::size_t n = view.size();

    std::vector<double> target(n);
    for (std::size_t i = 0; i < n; ++i) {
        target[i] = view.target(ds, i);
    }
    const auto zt = unit_centered(std::move(target));

    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = view.features(ds, i);
        for (std::size_t j = 0; j < d; ++j) {
            cols[j][i] = x[j];
        }
    }
    std::vector<double> r_target(d);
    for (std::size_t j = 0; j < d; ++j) {
        cols[j] = unit_centered(std::move(cols[j]));
        r_target[j] = std::abs(dot(cols[j], zt));
    }

    std::vector<bool> chosen(d, false);
    std::vector<double> cross_sum(d, 0.0);  // sum of |r| between candidate and the selected set
    std::vector<std::size_t> selected;
    double sum_target = 0.0;
    double sum_pairs = 0.0;
    double merit = 0.0;

    while (selected.size() < d) {
        const auto k = static_cast<double>(selected.size() + 1);
        std::size_t best = d;
        double best_merit = -1.0;
        for (std::size_t j = 0; j < d; ++j) {
            if (chosen[j]) {
                continue;
            }
            const double m = (sum_target + r_target[j]) / std::sqrt(k + 2.0 * (sum_pairs + cross_sum[j]));
            if (m > best_merit) {
                best_merit = m;
                best = j;
            }
        }
        if (!selected.empty() && !(best_merit > merit)) {
            break;
        }
        chosen[best] = true;
        selected.push_back(best);
        sum_target += r_target[best];
        sum_pairs += cross_sum[best];
        merit = best_merit;
        for (std::size_t j = 0; j < d; ++j) {
            if (!chosen[j]) {
                cross_sum[j] += std::abs(dot(cols[j], cols[best]));
            }
        }
    }
    return {cap_subset(std::move(selected), cap, seed), view.label};
}

}  // namespace dcc
