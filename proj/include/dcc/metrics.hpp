#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dcc/dataset.hpp"

namespace dcc {

struct label_tally {
    std::uint64_t tp{0};
    std::uint64_t fp{0};
    std::uint64_t fn{0};
    std::uint64_t tn{0};

    bool operator==(const label_tally &) const = default;
};

/// The eleven multi-label quality criteria, all as losses (lower is better).
struct evaluation_report {
    double hamming{0.0};
    double zero_one{0.0};
    double ex_fdr{0.0};
    double ex_fnr{0.0};
    double ex_f1_loss{0.0};
    double macro_fdr{0.0};
    double macro_fnr{0.0};
    double macro_f1_loss{0.0};
    double micro_fdr{0.0};
    double micro_fnr{0.0};
    double micro_f1_loss{0.0};
    std::vector<label_tally> support;
};

inline constexpr std::array<std::string_view, 11> metric_names{
    "hamming",   "zero_one",  "ex_fdr",        "ex_fnr",    "ex_f1_loss",   "macro_fdr",
    "macro_fnr", "macro_f1_loss", "micro_fdr", "micro_fnr", "micro_f1_loss"};

/// Values in metric_names order.
std::array<double, 11> metric_values(const evaluation_report &r);
double metric_value(const evaluation_report &r, std::string_view name);

/**
 * Conventions for empty denominators (per row and per label alike):
 * FDR = 0 when nothing is predicted, FNR = 0 when nothing is relevant,
 * F1 loss = 0 when both are empty.
 */
evaluation_report evaluate(const label_matrix &truth, const label_matrix &predicted);

/// Flat JSON object with exactly the eleven metric keys.
std::string to_json(const evaluation_report &r);

}  // namespace dcc
