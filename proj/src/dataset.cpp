#include "dcc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

namespace dcc {

namespace {

std::vector<std::string> default_names(const char *prefix, std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(prefix + std::to_string(i));
    }
    return names;
}

bool has_duplicates(const std::vector<std::string> &names) {
    std::set<std::string_view> seen;
    for (const auto &n : names) {
        if (!seen.insert(n).second) {
            return true;
        }
    }
    return false;
}

std::vector<std::string_view> split_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view cell, std::size_t line, std::size_t col) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    double v{};
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw parse_error("line " + std::to_string(line) + ", column " + std::to_string(col + 1) +
                          ": cannot parse '" + std::string(cell) + "' as a number");
    }
    return v;
}

std::uint8_t parse_label(std::string_view cell, std::size_t line, std::size_t col) {
    cell = trim(cell);
    if (cell == "0") {
        return 0;
    }
    if (cell == "1") {
        return 1;
    }
    throw validation_error("line " + std::to_string(line) + ", column " + std::to_string(col + 1) +
                           ": label value '" + std::string(cell) + "' is not 0 or 1");
}

std::ifstream open_input(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open '" + path.string() + "'");
    }
    return in;
}

}  // namespace

multi_label_dataset::multi_label_dataset(feature_matrix features, label_matrix labels,
                                         std::vector<std::string> feature_names, std::vector<std::string> label_names)
    : features_{std::move(features)},
      labels_{std::move(labels)},
      feature_names_{std::move(feature_names)},
      label_names_{std::move(label_names)} {
    if (features_.rows() == 0 || features_.cols() == 0 || labels_.cols() == 0) {
        throw validation_error("dataset needs at least one row, one feature and one label");
    }
    if (features_.rows() != labels_.rows()) {
        throw validation_error("feature and label matrices have different row counts");
    }
    if (std::any_of(labels_.data().begin(), labels_.data().end(), [](std::uint8_t v) { return v > 1; })) {
        throw validation_error("label entries must be 0 or 1");
    }
    if (feature_names_.empty()) {
        feature_names_ = default_names("x", features_.cols());
    }
    if (label_names_.empty()) {
        label_names_ = default_names("y", labels_.cols());
    }
    if (feature_names_.size() != features_.cols() || label_names_.size() != labels_.cols()) {
        throw validation_error("name count does not match column count");
    }
    if (has_duplicates(feature_names_) || has_duplicates(label_names_)) {
        throw validation_error("duplicate feature or label name");
    }
}

multi_label_dataset multi_label_dataset::subset(std::span<const std::size_t> rows) const {
    return {features_.select_rows(rows), labels_.select_rows(rows), feature_names_, label_names_};
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

multi_label_dataset read_csv(std::istream &in, std::size_t label_count) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("missing header row");
    }
    const auto header = split_line(line);
    const std::size_t cols = header.size();
    if (label_count == 0 || label_count >= cols) {
        throw argument_error("label_count " + std::to_string(label_count) + " must be in [1, " +
                             std::to_string(cols - 1) + "] for " + std::to_string(cols) + " columns");
    }
    const std::size_t d = cols - label_count;
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;
    for (std::size_t c = 0; c < cols; ++c) {
        (c < d ? feature_names : label_names).emplace_back(trim(header[c]));
    }

    std::vector<double> feats;
    std::vector<std::uint8_t> labs;
    std::size_t line_no = 1;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != cols) {
            throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                              " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < d; ++c) {
            feats.push_back(parse_double(cells[c], line_no, c));
        }
        for (std::size_t c = d; c < cols; ++c) {
            labs.push_back(parse_label(cells[c], line_no, c));
        }
        ++n;
    }
    if (n == 0) {
        throw parse_error("no data rows");
    }
    feature_matrix fm(n, d);
    fm.data() = std::move(feats);
    label_matrix lm(n, label_count);
    lm.data() = std::move(labs);
    return {std::move(fm), std::move(lm), std::move(feature_names), std::move(label_names)};
}

multi_label_dataset load_csv(const std::filesystem::path &path, std::size_t label_count) {
    auto in = open_input(path);
    return read_csv(in, label_count);
}

void write_csv(std::ostream &out, const multi_label_dataset &ds) {
    const auto write_names = [&](const std::vector<std::string> &names, bool lead_comma) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (lead_comma || i > 0) {
                out << ',';
            }
            out << names[i];
        }
    };
    write_names(ds.feature_names(), false);
    write_names(ds.label_names(), true);
    out << '\n';
    for (std::size_t r = 0; r < ds.num_rows(); ++r) {
        const auto x = ds.features().row(r);
        for (std::size_t c = 0; c < x.size(); ++c) {
            if (c > 0) {
                out << ',';
            }
            out << format_double(x[c]);
        }
        for (const auto y : ds.labels().row(r)) {
            out << ',' << static_cast<int>(y);
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path &path, const multi_label_dataset &ds) {
    std::ofstream out(path);
    if (!out) {
        throw error("cannot write '" + path.string() + "'");
    }
    write_csv(out, ds);
}

feature_matrix read_feature_csv(std::istream &in, std::vector<std::string> *names) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("missing header row");
    }
    const auto header = split_line(line);
    const std::size_t cols = header.size();
    if (names != nullptr) {
        names->clear();
        for (const auto h : header) {
            names->emplace_back(trim(h));
        }
    }
    std::vector<double> values;
    std::size_t line_no = 1;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != cols) {
            throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                              " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            values.push_back(parse_double(cells[c], line_no, c));
        }
        ++n;
    }
    feature_matrix fm(n, cols);
    fm.data() = std::move(values);
    return fm;
}

feature_matrix load_feature_csv(const std::filesystem::path &path, std::vector<std::string> *names) {
    auto in = open_input(path);
    return read_feature_csv(in, names);
}

label_matrix read_label_csv(std::istream &in, std::vector<std::string> *names) {
    std::string line;
    if (!std::getline(in, line)) {
        throw parse_error("missing header row");
    }
    const auto header = split_line(line);
    const std::size_t cols = header.size();
    if (names != nullptr) {
        names->clear();
        for (const auto h : header) {
            names->emplace_back(trim(h));
        }
    }
    std::vector<std::uint8_t> labs;
    std::size_t line_no = 1;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != cols) {
            throw parse_error("line " + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                              " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            labs.push_back(parse_label(cells[c], line_no, c));
        }
        ++n;
    }
    label_matrix lm(n, cols);
    lm.data() = std::move(labs);
    return lm;
}

label_matrix load_label_csv(const std::filesystem::path &path, std::vector<std::string> *names) {
    auto in = open_input(path);
    return read_label_csv(in, names);
}

void write_label_csv(std::ostream &out, const label_matrix &labels, const std::vector<std::string> &names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << (i > 0 ? "," : "") << names[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < labels.rows(); ++r) {
        const auto row = labels.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c > 0 ? "," : "") << static_cast<int>(row[c]);
        }
        out << '\n';
    }
}

std::pair<multi_label_dataset, standardization_params> standardize(const multi_label_dataset &ds) {
    const std::size_t n = ds.num_rows();
    const std::size_t d = ds.num_features();
    const auto &x = ds.features();
    standardization_params params{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        double lo = x(0, c);
        double hi = x(0, c);
        for (std::size_t r = 0; r < n; ++r) {
            sum += x(r, c);
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        const double mean = sum / static_cast<double>(n);
        params.means[c] = mean;
        // exact constancy test; a floating variance of a constant column need not be 0
        if (lo == hi) {
            continue;
        }
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = x(r, c) - mean;
            ss += dev * dev;
        }
        params.stddevs[c] = std::sqrt(ss / static_cast<double>(n));
    }
    auto out = apply_standardization(ds, params);
    return {std::move(out), std::move(params)};
}

void apply_standardization(std::span<const double> in, const standardization_params &params, std::span<double> out) {
    if (in.size() != params.means.size() || out.size() != in.size()) {
        throw argument_error("standardization expects " + std::to_string(params.means.size()) + " features, got " +
                             std::to_string(in.size()));
    }
    for (std::size_t c = 0; c < in.size(); ++c) {
        const double s = params.stddevs[c];
        out[c] = s > 0.0 ? (in[c] - params.means[c]) / s : 0.0;
    }
}

multi_label_dataset apply_standardization(const multi_label_dataset &ds, const standardization_params &params) {
    if (params.means.size() != ds.num_features() || params.stddevs.size() != ds.num_features()) {
        throw argument_error("standardization parameters have dimension " + std::to_string(params.means.size()) +
                             ", dataset has " + std::to_string(ds.num_features()));
    }
    feature_matrix out(ds.num_rows(), ds.num_features());
    for (std::size_t r = 0; r < ds.num_rows(); ++r) {
        apply_standardization(ds.features().row(r), params, out.row(r));
    }
    return {std::move(out), ds.labels(), ds.feature_names(), ds.label_names()};
}

split_pair split_train_validation(const multi_label_dataset &ds, double t, rng_seed seed) {
    if (!(t > 0.0 && t < 1.0)) {
        throw argument_error("split ratio must lie in (0,1)");
    }
    const std::size_t n = ds.num_rows();
    if (n < 2) {
        throw argument_error("splitting needs at least 2 rows");
    }
    // round half up, then keep both parts non-empty
    auto n_train = static_cast<std::size_t>(std::floor(t * static_cast<double>(n) + 0.5));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto eng = make_engine(seed);
    std::shuffle(perm.begin(), perm.end(), eng);

    std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> valid(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(train.begin(), train.end());
    std::sort(valid.begin(), valid.end());
    return {ds.subset(train), ds.subset(valid), std::move(train), std::move(valid), t};
}

std::vector<split_pair> kfold(const multi_label_dataset &ds, std::size_t k, rng_seed seed) {
    const std::size_t n = ds.num_rows();
    if (k < 2 || k > n) {
        throw argument_error("fold count " + std::to_string(k) + " must lie in [2, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto eng = make_engine(seed);
    std::shuffle(perm.begin(), perm.end(), eng);

    std::vector<split_pair> folds;
    folds.reserve(k);
    std::size_t begin = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(begin),
                                      perm.begin() + static_cast<std::ptrdiff_t>(begin + size));
        std::sort(test.begin(), test.end());
        std::vector<std::size_t> train;
        train.reserve(n - size);
        std::size_t j = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (j < test.size() && test[j] == r) {
                ++j;
            } else {
                train.push_back(r);
            }
        }
        const double ratio = static_cast<double>(train.size()) / static_cast<double>(n);
        folds.push_back({ds.subset(train), ds.subset(test), std::move(train), std::move(test), ratio});
        begin += size;
    }
    return folds;
}

std::vector<std::size_t> bag_indices(std::size_t n, double fraction, rng_seed seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw argument_error("bag fraction must lie in (0,1]");
    }
    auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
    m = std::clamp<std::size_t>(m, 1, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto eng = make_engine(seed);
    std::shuffle(perm.begin(), perm.end(), eng);
    perm.resize(m);
    return perm;
}

multi_label_dataset bag_sample(const multi_label_dataset &ds, double fraction, rng_seed seed) {
    const auto rows = bag_indices(ds.num_rows(), fraction, seed);
    return ds.subset(rows);
}

}  // namespace dcc
