#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dcc/errors.hpp"
#include "dcc/rng.hpp"

namespace dcc {

/// Dense row-major matrix.
template <typename T>
class matrix {
  public:
    matrix() = default;
    matrix(std::size_t rows, std::size_t cols, T fill = T{}) : rows_{rows}, cols_{cols}, data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    [[nodiscard]] std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    [[nodiscard]] std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    [[nodiscard]] const std::vector<T> &data() const noexcept { return data_; }
    [[nodiscard]] std::vector<T> &data() noexcept { return data_; }

    /// Copy of the given rows, in the given order.
    [[nodiscard]] matrix select_rows(std::span<const std::size_t> rows) const {
        matrix out(rows.size(), cols_);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto src = row(rows[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

    bool operator==(const matrix &) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<T> data_;
};

using feature_matrix = matrix<double>;
using label_matrix = matrix<std::uint8_t>;

/**
 * N x d numeric features paired with an N x L binary relevance matrix.
 *
 * Invariants are checked on construction: N, d, L >= 1, aligned row counts,
 * labels in {0,1}, unique names.
 */
class multi_label_dataset {
  public:
    multi_label_dataset(feature_matrix features, label_matrix labels, std::vector<std::string> feature_names = {},
                        std::vector<std::string> label_names = {});

    [[nodiscard]] std::size_t num_rows() const noexcept { return features_.rows(); }
    [[nodiscard]] std::size_t num_features() const noexcept { return features_.cols(); }
    [[nodiscard]] std::size_t num_labels() const noexcept { return labels_.cols(); }

    [[nodiscard]] const feature_matrix &features() const noexcept { return features_; }
    [[nodiscard]] const label_matrix &labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::vector<std::string> &label_names() const noexcept { return label_names_; }

    [[nodiscard]] multi_label_dataset subset(std::span<const std::size_t> rows) const;

    bool operator==(const multi_label_dataset &) const = default;

  private:
    feature_matrix features_;
    label_matrix labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> label_names_;
};

struct standardization_params {
    std::vector<double> means;
    /// Population standard deviations; 0 marks a constant column.
    std::vector<double> stddevs;

    bool operator==(const standardization_params &) const = default;
};

/// Train/validation partition. Row indices refer to the source dataset.
struct split_pair {
    multi_label_dataset train_part;
    multi_label_dataset validation_part;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> validation_rows;
    double ratio;
};

multi_label_dataset load_csv(const std::filesystem::path &path, std::size_t label_count);
multi_label_dataset read_csv(std::istream &in, std::size_t label_count);
void save_csv(const std::filesystem::path &path, const multi_label_dataset &ds);
void write_csv(std::ostream &out, const multi_label_dataset &ds);

/// Reads a CSV whose columns are all numeric features (header = feature names).
feature_matrix read_feature_csv(std::istream &in, std::vector<std::string> *names = nullptr);
feature_matrix load_feature_csv(const std::filesystem::path &path, std::vector<std::string> *names = nullptr);

/// Reads a CSV whose columns are all binary labels (header = label names).
label_matrix read_label_csv(std::istream &in, std::vector<std::string> *names = nullptr);
label_matrix load_label_csv(const std::filesystem::path &path, std::vector<std::string> *names = nullptr);
void write_label_csv(std::ostream &out, const label_matrix &labels, const std::vector<std::string> &names);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

std::pair<multi_label_dataset, standardization_params> standardize(const multi_label_dataset &ds);
multi_label_dataset apply_standardization(const multi_label_dataset &ds, const standardization_params &params);
void apply_standardization(std::span<const double> in, const standardization_params &params, std::span<double> out);

split_pair split_train_validation(const multi_label_dataset &ds, double t, rng_seed seed);
std::vector<split_pair> kfold(const multi_label_dataset &ds, std::size_t k, rng_seed seed);

std::vector<std::size_t> bag_indices(std::size_t n, double fraction, rng_seed seed);
multi_label_dataset bag_sample(const multi_label_dataset &ds, double fraction, rng_seed seed);

}  // namespace dcc
