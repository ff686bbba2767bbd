#include "shipbreak/panel/series_ops.hpp"

#include <algorithm>
#include <cmath>

namespace shipbreak::panel {

CalibrationResult calibrate_overlap(
    const SparseSeries& a, const SparseSeries& b,
    const std::vector<std::pair<int, int>>& overlap) {
    if (overlap.empty()) {
        throw NoOverlap("no overlap pairs between '" + a.key + "' and '" + b.key +
                        "'");
    }
    CalibrationResult result;
    double sum = 0.0;
    for (const auto& [ya, yb] : overlap) {
        if (!a.has(ya)) {
            throw NoOverlap("series '" + a.key + "' has no value in overlap year " +
                            std::to_string(ya));
        }
        if (!b.has(yb)) {
            throw NoOverlap("series '" + b.key + "' has no value in overlap year " +
                            std::to_string(yb));
        }
        const double denom = b.value(yb);
        if (denom == 0.0) {
            throw ZeroDenominator("series '" + b.key + "' is zero in overlap year " +
                                  std::to_string(yb));
        }
        const double ratio = a.value(ya) / denom;
        result.ratios.push_back(ratio);
        sum += ratio;
        if (ya != yb) result.adjacent_years = true;
    }
    result.factor = sum / static_cast<double>(result.ratios.size());
    if (result.factor == 0.0) {
        throw ZeroDenominator("splice factor between '" + a.key + "' and '" + b.key +
                              "' is zero");
    }
    for (double r : result.ratios) {
        result.max_discontinuity =
            std::max(result.max_discontinuity,
                     std::fabs(r - result.factor) / std::fabs(result.factor));
    }
    return result;
}

DirectionalSplit allocate_directional(double total, double e_ref, double w_ref) {
    if (total < 0.0) throw NonPositiveInput("allocation total must be >= 0");
    if (e_ref < 0.0 || w_ref < 0.0) {
        throw NonPositiveInput("allocation references must be >= 0");
    }
    const double denom = e_ref + w_ref;
    if (denom == 0.0) {
        throw ZeroReference("both directional references are zero");
    }
    DirectionalSplit split;
    split.east = total * e_ref / denom;
    split.west = total - split.east; // the pair sums to total exactly
    return split;
}

double fixed_ratio_impute(SparseSeries& target, const SparseSeries& reference,
                          const std::vector<int>& anchor_years,
                          const std::vector<int>& fill_years) {
    if (anchor_years.empty()) {
        throw NoAnchor("ratio imputation for '" + target.key +
                       "' has no anchor years");
    }
    double sum = 0.0;
    for (int y : anchor_years) {
        if (!target.has(y) || !reference.has(y)) {
            throw NoAnchor("anchor year " + std::to_string(y) +
                           " is missing from '" + target.key + "' or '" +
                           reference.key + "'");
        }
        const double denom = reference.value(y);
        if (denom == 0.0) {
            throw ZeroDenominator("reference '" + reference.key +
                                  "' is zero in anchor year " + std::to_string(y));
        }
        sum += target.value(y) / denom;
    }
    const double ratio = sum / static_cast<double>(anchor_years.size());
    for (int y : fill_years) {
        if (target.has(y)) continue; // never overwrite
        if (!reference.has(y)) {
            throw ReferenceGap("reference '" + reference.key + "' lacks year " +
                               std::to_string(y) + " needed to fill '" +
                               target.key + "'");
        }
        target.cells[y] = Cell{ratio * reference.value(y), Provenance::ratio_imputed};
    }
    return ratio;
}

std::vector<int> interpolate_linear(SparseSeries& series) {
    if (series.cells.size() < 2) {
        throw TooFewObservations("series '" + series.key +
                                 "' needs at least 2 observations to interpolate");
    }
    return interpolate_linear(series, series.first_year(), series.last_year());
}

std::vector<int> interpolate_linear(SparseSeries& series, int span_first,
                                    int span_last) {
    if (series.cells.size() < 2) {
        throw TooFewObservations("series '" + series.key +
                                 "' needs at least 2 observations to interpolate");
    }
    if (span_first < series.first_year() || span_last > series.last_year()) {
        throw ExtrapolationRequired(
            "span [" + std::to_string(span_first) + ", " +
            std::to_string(span_last) + "] extends beyond the observed hull [" +
            std::to_string(series.first_year()) + ", " +
            std::to_string(series.last_year()) + "] of '" + series.key + "'");
    }
    std::vector<int> filled;
    auto it = series.cells.begin();
    auto prev = it++;
    for (; it != series.cells.end(); prev = it++) {
        const int y0 = prev->first;
        const int y1 = it->first;
        const double v0 = prev->second.value;
        const double v1 = it->second.value;
        for (int y = y0 + 1; y < y1; ++y) {
            if (y < span_first || y > span_last) continue;
            const double frac =
                static_cast<double>(y - y0) / static_cast<double>(y1 - y0);
            filled.push_back(y);
            series.cells[y] = Cell{v0 + (v1 - v0) * frac, Provenance::interpolated};
        }
    }
    std::sort(filled.begin(), filled.end());
    return filled;
}

SummaryStats summary_stats(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw TooFewObservations("summary statistics need at least 2 values; got " +
                                 std::to_string(values.size()));
    }
    SummaryStats st;
    st.n = static_cast<int>(values.size());
    double sum = 0.0;
    st.min = values.front();
    st.max = values.front();
    for (double v : values) {
        sum += v;
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    st.mean = sum / st.n;
    double ss = 0.0;
    for (double v : values) ss += (v - st.mean) * (v - st.mean);
    st.sd = std::sqrt(ss / (st.n - 1));
    return st;
}

} // namespace shipbreak::panel
