#include "dcc/metrics.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "dcc/errors.hpp"

namespace dcc {

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double fdr(double tp, double fp) { return ratio_or_zero(fp, tp + fp); }
double fnr(double tp, double fn) { return ratio_or_zero(fn, tp + fn); }
double f1_loss(double tp, double fp, double fn) {
    const double den = 2.0 * tp + fp + fn;
    return den > 0.0 ? 1.0 - 2.0 * tp / den : 0.0;
}

}  // namespace

std::array<double, 11> metric_values(const evaluation_report &r) {
    return {r.hamming,   r.zero_one,      r.ex_fdr,    r.ex_fnr,    r.ex_f1_loss,   r.macro_fdr,
            r.macro_fnr, r.macro_f1_loss, r.micro_fdr, r.micro_fnr, r.micro_f1_loss};
}

double metric_value(const evaluation_report &r, std::string_view name) {
    const auto it = std::find(metric_names.begin(), metric_names.end(), name);
    if (it == metric_names.end()) {
        throw argument_error("unknown metric '" + std::string(name) + "'");
    }
    return metric_values(r)[static_cast<std::size_t>(it - metric_names.begin())];
}

evaluation_report evaluate(const label_matrix &truth, const label_matrix &predicted) {
    if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols()) {
        throw argument_error("truth and prediction shapes differ");
    }
    if (truth.rows() == 0 || truth.cols() == 0) {
        throw argument_error("evaluation needs at least one row and one label");
    }
    const auto binary = [](const label_matrix &m) {
        return std::all_of(m.data().begin(), m.data().end(), [](std::uint8_t v) { return v <= 1; });
    };
    if (!binary(truth) || !binary(predicted)) {
        throw argument_error("label matrices must be binary");
    }
    const std::size_t n = truth.rows();
    const std::size_t L = truth.cols();
    evaluation_report r;
    r.support.assign(L, {});
    std::uint64_t bit_errors = 0;
    std::uint64_t wrong_rows = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t tp = 0;
        std::uint64_t fp = 0;
        std::uint64_t fn = 0;
        for (std::size_t l = 0; l < L; ++l) {
            const bool t = truth(i, l) == 1;
            const bool p = predicted(i, l) == 1;
            auto &s = r.support[l];
            if (t && p) {
                ++tp;
                ++s.tp;
            } else if (p) {
                ++fp;
                ++s.fp;
            } else if (t) {
                ++fn;
                ++s.fn;
            } else {
                ++s.tn;
            }
        }
        bit_errors += fp + fn;
        wrong_rows += (fp + fn) > 0 ? 1 : 0;
        const auto dtp = static_cast<double>(tp);
        const auto dfp = static_cast<double>(fp);
        const auto dfn = static_cast<double>(fn);
        r.ex_fdr += fdr(dtp, dfp);
        r.ex_fnr += fnr(dtp, dfn);
        r.ex_f1_loss += f1_loss(dtp, dfp, dfn);
    }
    const auto dn = static_cast<double>(n);
    r.hamming = static_cast<double>(bit_errors) / (dn * static_cast<double>(L));
    r.zero_one = static_cast<double>(wrong_rows) / dn;
    r.ex_fdr /= dn;
    r.ex_fnr /= dn;
    r.ex_f1_loss /= dn;

    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    for (const auto &s : r.support) {
        const auto stp = static_cast<double>(s.tp);
        const auto sfp = static_cast<double>(s.fp);
        const auto sfn = static_cast<double>(s.fn);
        r.macro_fdr += fdr(stp, sfp);
        r.macro_fnr += fnr(stp, sfn);
        r.macro_f1_loss += f1_loss(stp, sfp, sfn);
        tp += stp;
        fp += sfp;
        fn += sfn;
    }
    const auto dl = static_cast<double>(L);
    r.macro_fdr /= dl;
    r.macro_fnr /= dl;
    r.macro_f1_loss /= dl;
    r.micro_fdr = fdr(tp, fp);
    r.micro_fnr = fnr(tp, fn);
    r.micro_f1_loss = f1_loss(tp, fp, fn);
    return r;
}

std::string to_json(const evaluation_report &r) {
    nlohmann::ordered_json j;
    const auto values = metric_values(r);
    for (std::size_t i = 0; i < metric_names.size(); ++i) {
        j[std::string(metric_names[i])] = values[i];
    }
    return j.dump(2);
}

}  // namespace dcc
