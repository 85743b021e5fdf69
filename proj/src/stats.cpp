#include "dcc/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "dcc/errors.hpp"
#include "dcc/kv.hpp"

namespace dcc {

namespace {

constexpr std::size_t exact_limit = 50;

// Demšar (2006), Table 5: q_alpha for 2..10 classifiers.
constexpr std::array<double, 9> q_005{1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
constexpr std::array<double, 9> q_010{1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};

double normal_two_sided(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

/// P(W <= w) under H0 for n untied ranks, by counting subsets per rank sum.
double exact_lower_tail(std::size_t n, double w) {
    const std::size_t total = n * (n + 1) / 2;
    std::vector<std::uint64_t> count(total + 1, 0);
    count[0] = 1;
    for (std::size_t rank = 1; rank <= n; ++rank) {
        for (std::size_t s = total; s >= rank; --s) {
            count[s] += count[s - rank];
        }
    }
    const auto limit = static_cast<std::size_t>(std::floor(w));
    long double hits = 0;
    for (std::size_t s = 0; s <= std::min(limit, total); ++s) {
        hits += static_cast<long double>(count[s]);
    }
    return static_cast<double>(hits / std::ldexp(1.0L, static_cast<int>(n)));
}

}  // namespace

std::vector<double> mid_ranks(std::span<const double> values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && values[idx[j + 1]] == values[idx[i]]) {
            ++j;
        }
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[idx[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

wilcoxon_result wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw argument_error("paired samples must have equal length");
    }
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            diff.push_back(a[i] - b[i]);
        }
    }
    const std::size_t n = diff.size();
    if (n < 5) {
        throw insufficient_data_error("Wilcoxon test needs at least 5 non-zero differences, got " +
                                      std::to_string(n));
    }
    std::vector<double> magnitude(n);
    std::transform(diff.begin(), diff.end(), magnitude.begin(), [](double d) { return std::abs(d); });
    const auto ranks = mid_ranks(magnitude);
    double w_plus = 0.0;
    double w_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        (diff[i] > 0.0 ? w_plus : w_minus) += ranks[i];
    }
    wilcoxon_result res;
    res.n = n;
    res.statistic = std::min(w_plus, w_minus);

    // tie groups of |d|
    std::vector<double> sorted = magnitude;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        if (t > 1.0) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    if (!ties && n <= exact_limit) {
        res.exact = true;
        res.p_value = std::min(1.0, 2.0 * exact_lower_tail(n, res.statistic));
        return res;
    }
    const auto dn = static_cast<double>(n);
    const double mean = dn * (dn + 1.0) / 4.0;
    const double var = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) {
        res.p_value = 1.0;
        return res;
    }
    const double dev = std::max(0.0, std::abs(w_plus - mean) - 0.5);
    res.p_value = std::min(1.0, normal_two_sided(dev / std::sqrt(var)));
    return res;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (const auto p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw argument_error("p-values must lie in [0,1]");
        }
    }
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double candidate = std::min(1.0, static_cast<double>(m - j) * p_values[idx[j]]);
        running = std::max(running, candidate);
        adjusted[idx[j]] = running;
    }
    return adjusted;
}

double nemenyi_q(std::size_t a, double alpha) {
    if (a < 2 || a > 10) {
        throw unsupported_error("Nemenyi constants are tabulated for 2..10 algorithms");
    }
    if (alpha == 0.05) {
        return q_005[a - 2];
    }
    if (alpha == 0.1) {
        return q_010[a - 2];
    }
    throw argument_error("Nemenyi alpha must be 0.05 or 0.1");
}

friedman_result friedman_nemenyi(const comparison_matrix &m, double alpha) {
    const std::size_t A = m.scores.rows();
    const std::size_t D = m.scores.cols();
    if (A < 3) {
        throw unsupported_error("Friedman test needs at least 3 algorithms; use the Wilcoxon test for pairs");
    }
    if (D < 2) {
        throw insufficient_data_error("Friedman test needs at least 2 datasets");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw argument_error("alpha must lie in (0,1)");
    }
    const double q = nemenyi_q(A, alpha);

    friedman_result res;
    res.average_ranks.assign(A, 0.0);
    std::vector<double> column(A);
    for (std::size_t d = 0; d < D; ++d) {
        for (std::size_t a = 0; a < A; ++a) {
            column[a] = m.scores(a, d);
        }
        const auto r = mid_ranks(column);
        for (std::size_t a = 0; a < A; ++a) {
            res.average_ranks[a] += r[a];
        }
    }
    const auto dA = static_cast<double>(A);
    const auto dD = static_cast<double>(D);
    double sum_sq = 0.0;
    for (auto &r : res.average_ranks) {
        r /= dD;
        sum_sq += r * r;
    }
    res.statistic = 12.0 * dD / (dA * (dA + 1.0)) * (sum_sq - dA * (dA + 1.0) * (dA + 1.0) / 4.0);
    // all-tie tables give 0 up to rounding
    res.statistic = std::max(0.0, res.statistic);
    if (res.statistic < 1e-12) {
        res.statistic = 0.0;
    }
    const boost::math::chi_squared chi2(dA - 1.0);
    res.p_value = res.statistic == 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(chi2, res.statistic));
    res.critical_distance = q * std::sqrt(dA * (dA + 1.0) / (6.0 * dD));
    return res;
}

comparison_matrix load_comparison(const std::filesystem::path &means_csv, const std::string &metric) {
    std::ifstream in(means_csv);
    if (!in) {
        throw parse_error("cannot open '" + means_csv.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("empty report file");
    }
    const auto header = split(line, ',');
    const auto col_of = [&](const std::string &name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw parse_error("report file has no '" + name + "' column");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto ds_col = col_of("dataset");
    const auto alg_col = col_of("algorithm");
    const auto val_col = col_of(metric);

    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    std::map<std::pair<std::string, std::string>, double> cells;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != header.size()) {
            throw parse_error("report row has " + std::to_string(f.size()) + " fields");
        }
        if (f[val_col].empty()) {
            throw validation_error("missing " + metric + " for " + f[alg_col] + " on " + f[ds_col]);
        }
        if (std::find(algorithms.begin(), algorithms.end(), f[alg_col]) == algorithms.end()) {
            algorithms.push_back(f[alg_col]);
        }
        if (std::find(datasets.begin(), datasets.end(), f[ds_col]) == datasets.end()) {
            datasets.push_back(f[ds_col]);
        }
        cells[{f[alg_col], f[ds_col]}] = std::stod(f[val_col]);
    }
    comparison_matrix m{matrix<double>(algorithms.size(), datasets.size()), algorithms, datasets};
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
        for (std::size_t d = 0; d < datasets.size(); ++d) {
            const auto it = cells.find({algorithms[a], datasets[d]});
            if (it == cells.end()) {
                throw validation_error("no entry for " + algorithms[a] + " on " + datasets[d]);
            }
            m.scores(a, d) = it->second;
        }
    }
    return m;
}

}  // namespace dcc
