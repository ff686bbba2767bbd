#include "shipbreak/time_series.hpp"

#include <cmath>

namespace shipbreak {

void TimeSeries::validate() const {
    const std::size_t t_len = values.size();
    if (t_len == 0) throw InvalidSeries("series '" + id + "' is empty");
    if (periods.size() != t_len) {
        throw InvalidSeries("series '" + id + "': " + std::to_string(periods.size()) +
                            " periods for " + std::to_string(t_len) + " values");
    }
    for (std::size_t t = 1; t < t_len; ++t) {
        if (periods[t] != periods[t - 1] + 1) {
            throw InvalidSeries("series '" + id + "': period grid breaks between " +
                                std::to_string(periods[t - 1]) + " and " +
                                std::to_string(periods[t]) + " (must be unit-step)");
        }
    }
    for (std::size_t t = 0; t < t_len; ++t) {
        if (!std::isfinite(values[t])) {
            throw InvalidSeries("series '" + id + "': non-finite value at period " +
                                std::to_string(periods[t]));
        }
    }
    if (!regressors.empty()) {
        if (regressor_dim < 1) {
            throw InvalidSeries("series '" + id + "': regressor_dim must be >= 1");
        }
        if (regressors.size() != t_len * static_cast<std::size_t>(regressor_dim)) {
            throw InvalidSeries("series '" + id + "': regressor matrix is " +
                                std::to_string(regressors.size()) + " entries, want " +
                                std::to_string(t_len) + " x " +
                                std::to_string(regressor_dim));
        }
        for (double z : regressors) {
            if (!std::isfinite(z)) {
                throw InvalidSeries("series '" + id + "': non-finite regressor entry");
            }
        }
    }
}

TimeSeries TimeSeries::window(int first_period, int last_period) const {
    if (first_period > last_period) {
        throw InvalidSeries("series '" + id + "': window [" +
                            std::to_string(first_period) + ", " +
                            std::to_string(last_period) + "] is empty");
    }
    TimeSeries out;
    out.id = id;
    out.regressor_dim = regressor_dim;
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (periods[t] < first_period || periods[t] > last_period) continue;
        out.periods.push_back(periods[t]);
        out.values.push_back(values[t]);
        if (!regressors.empty()) {
            for (int k = 0; k < regressor_dim; ++k) {
                out.regressors.push_back(regressors[t * regressor_dim + k]);
            }
        }
    }
    if (out.values.empty()) {
        throw InvalidSeries("series '" + id + "': window [" +
                            std::to_string(first_period) + ", " +
                            std::to_string(last_period) +
                            "] contains no observations");
    }
    return out;
}

TimeSeries TimeSeries::from_start(std::string id, int start_period,
                                  std::vector<double> values) {
    TimeSeries s;
    s.id = std::move(id);
    s.values = std::move(values);
    s.periods.resize(s.values.size());
    for (std::size_t t = 0; t < s.periods.size(); ++t) {
        s.periods[t] = start_period + static_cast<int>(t);
    }
    return s;
}

void BreakSet::validate(int t_len, int min_len) const {
    int prev = 0; // last index of the previous regime
    for (std::size_t k = 0; k < indices.size(); ++k) {
        int b = indices[k];
        if (b <= prev) {
            throw InvalidBreaks("break indices must be strictly increasing; got " +
                                std::to_string(b) + " after " + std::to_string(prev));
        }
        if (b - prev < min_len) {
            throw InvalidBreaks("regime ending at index " + std::to_string(b) +
                                " has length " + std::to_string(b - prev) +
                                " < min_len " + std::to_string(min_len));
        }
        if (b > t_len - min_len) {
            throw InvalidBreaks("break index " + std::to_string(b) +
                                " leaves fewer than min_len observations after it");
        }
        prev = b;
    }
    if (t_len - prev < min_len) {
        throw InvalidBreaks("final regime has length " + std::to_string(t_len - prev) +
                            " < min_len " + std::to_string(min_len));
    }
}

} // namespace shipbreak
