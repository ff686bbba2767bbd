#include "shipbreak/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "shipbreak/csv.hpp"

namespace shipbreak {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// NaN == NaN, -inf == -inf; everything else is plain equality.
bool same_double(double a, double b) {
    if (std::isnan(a) && std::isnan(b)) return true;
    return a == b;
}

bool same_vector(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_double(a[i], b[i])) return false;
    }
    return true;
}

} // namespace

bool AnalysisConfig::operator==(const AnalysisConfig& other) const {
    return min_len == other.min_len && max_m == other.max_m &&
           level == other.level &&
           flags.het_regressors == other.flags.het_regressors &&
           flags.het_errors == other.flags.het_errors &&
           bandwidth == other.bandwidth && window == other.window;
}

bool BreakReport::operator==(const BreakReport& other) const {
    if (series_id != other.series_id || first_period != other.first_period ||
        last_period != other.last_period || !(config == other.config)) {
        return false;
    }
    if (selection.chosen_m != other.selection.chosen_m ||
        selection.rows.size() != other.selection.rows.size()) {
        return false;
    }
    for (std::size_t i = 0; i < selection.rows.size(); ++i) {
        const auto& a = selection.rows[i];
        const auto& b = other.selection.rows[i];
        if (a.m != b.m || a.feasible != b.feasible ||
            a.degenerate != b.degenerate || !same_double(a.total_ssr, b.total_ssr) ||
            !same_double(a.bic, b.bic) || !(a.breaks == b.breaks)) {
            return false;
        }
    }
    if (segments.size() != other.segments.size()) return false;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& a = segments[i];
        const auto& b = other.segments[i];
        if (a.first != b.first || a.last != b.last ||
            !same_vector(a.coefficients, b.coefficients) ||
            !same_double(a.ssr, b.ssr)) {
            return false;
        }
    }
    if (intervals.size() != other.intervals.size()) return false;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& a = intervals[i];
        const auto& b = other.intervals[i];
        if (a.break_index != b.break_index || a.break_period != b.break_period ||
            a.lower_period != b.lower_period || a.upper_period != b.upper_period ||
            !same_double(a.level, b.level) || a.zero_shift != b.zero_shift) {
            return false;
        }
    }
    if (fitted.size() != other.fitted.size()) return false;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const auto& a = fitted[i];
        const auto& b = other.fitted[i];
        if (a.period != b.period || !same_double(a.observed, b.observed) ||
            !same_double(a.fitted, b.fitted)) {
            return false;
        }
    }
    return true;
}

BreakReport analyze_series(const TimeSeries& series, const AnalysisConfig& config) {
    TimeSeries working = series;
    if (config.window) {
        working = series.window(config.window->first, config.window->second);
    }
    working.validate();

    BreakReport rep;
    rep.series_id = working.id;
    rep.first_period = working.periods.front();
    rep.last_period = working.periods.back();
    rep.config = config;

    auto sel = select_breaks(working, config.max_m, config.min_len);
    rep.selection = sel.table;
    rep.segments = sel.best.segments;

    if (!sel.best.breaks.indices.empty()) {
        rep.intervals = break_confidence_interval(
            working, sel.best.breaks, config.level, config.flags, config.bandwidth);
    }

    rep.fitted.reserve(static_cast<std::size_t>(working.length()));
    for (const auto& seg : rep.segments) {
        for (int t = seg.first; t <= seg.last; ++t) {
            double yhat = 0.0;
            for (int k = 0; k < working.q(); ++k) {
                yhat += working.regressor(t, k) * seg.coefficients[static_cast<std::size_t>(k)];
            }
            FittedPoint pt;
            pt.period = working.periods[static_cast<std::size_t>(t - 1)];
            pt.observed = working.values[static_cast<std::size_t>(t - 1)];
            pt.fitted = yhat;
            rep.fitted.push_back(pt);
        }
    }
    return rep;
}

namespace {

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double row_ssr_from_json(const json& j) {
    if (j.is_null()) return kNan;
    return j.get<double>();
}

double row_bic_from_json(const json& j, bool degenerate) {
    if (j.is_null()) return degenerate ? kNegInf : kNan;
    return j.get<double>();
}

} // namespace

std::string break_report_to_json(const BreakReport& report) {
    json root;
    root["series_id"] = report.series_id;
    root["first_period"] = report.first_period;
    root["last_period"] = report.last_period;

    json cfg;
    cfg["min_len"] = report.config.min_len;
    cfg["max_m"] = report.config.max_m;
    cfg["level"] = report.config.level;
    cfg["het_regressors"] = report.config.flags.het_regressors;
    cfg["het_errors"] = report.config.flags.het_errors;
    cfg["bandwidth"] =
        report.config.bandwidth ? json(*report.config.bandwidth) : json(nullptr);
    cfg["window"] = report.config.window
                        ? json::array({report.config.window->first,
                                       report.config.window->second})
                        : json(nullptr);
    root["config"] = cfg;

    json sel;
    sel["chosen_m"] = report.selection.chosen_m;
    sel["rows"] = json::array();
    for (const auto& row : report.selection.rows) {
        json r;
        r["m"] = row.m;
        r["feasible"] = row.feasible;
        r["degenerate"] = row.degenerate;
        r["ssr"] = finite_or_null(row.total_ssr);
        r["bic"] = finite_or_null(row.bic);
        r["breaks"] = row.breaks.indices;
        sel["rows"].push_back(std::move(r));
    }
    root["selection"] = sel;

    root["segments"] = json::array();
    for (const auto& seg : report.segments) {
        json s;
        s["first"] = seg.first;
        s["last"] = seg.last;
        s["coefficients"] = seg.coefficients;
        s["ssr"] = seg.ssr;
        root["segments"].push_back(std::move(s));
    }

    root["intervals"] = json::array();
    for (const auto& iv : report.intervals) {
        json s;
        s["break_index"] = iv.break_index;
        s["break_period"] = iv.break_period;
        s["lower_period"] = iv.lower_period;
        s["upper_period"] = iv.upper_period;
        s["level"] = iv.level;
        s["zero_shift"] = iv.zero_shift;
        root["intervals"].push_back(std::move(s));
    }

    root["fitted"] = json::array();
    for (const auto& pt : report.fitted) {
        json s;
        s["period"] = pt.period;
        s["observed"] = pt.observed;
        s["fitted"] = pt.fitted;
        root["fitted"].push_back(std::move(s));
    }

    return root.dump(2) + "\n";
}

BreakReport break_report_from_json(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid report JSON: ") + e.what());
    }
    try {
        BreakReport rep;
        rep.series_id = root.at("series_id").get<std::string>();
        rep.first_period = root.at("first_period").get<int>();
        rep.last_period = root.at("last_period").get<int>();

        const json& cfg = root.at("config");
        rep.config.min_len = cfg.at("min_len").get<int>();
        rep.config.max_m = cfg.at("max_m").get<int>();
        rep.config.level = cfg.at("level").get<double>();
        rep.config.flags.het_regressors = cfg.at("het_regressors").get<bool>();
        rep.config.flags.het_errors = cfg.at("het_errors").get<bool>();
        if (!cfg.at("bandwidth").is_null()) {
            rep.config.bandwidth = cfg.at("bandwidth").get<int>();
        }
        if (!cfg.at("window").is_null()) {
            const json& w = cfg.at("window");
            rep.config.window = std::make_pair(w.at(0).get<int>(), w.at(1).get<int>());
        }

        const json& sel = root.at("selection");
        rep.selection.chosen_m = sel.at("chosen_m").get<int>();
        for (const json& r : sel.at("rows")) {
            SelectionRow row;
            row.m = r.at("m").get<int>();
            row.feasible = r.at("feasible").get<bool>();
            row.degenerate = r.at("degenerate").get<bool>();
            row.total_ssr = row_ssr_from_json(r.at("ssr"));
            row.bic = row_bic_from_json(r.at("bic"), row.degenerate);
            row.breaks.indices = r.at("breaks").get<std::vector<int>>();
            rep.selection.rows.push_back(std::move(row));
        }

        for (const json& s : root.at("segments")) {
            SegmentFit seg;
            seg.first = s.at("first").get<int>();
            seg.last = s.at("last").get<int>();
            seg.coefficients = s.at("coefficients").get<std::vector<double>>();
            seg.ssr = s.at("ssr").get<double>();
            rep.segments.push_back(std::move(seg));
        }

        for (const json& s : root.at("intervals")) {
            BreakInterval iv;
            iv.break_index = s.at("break_index").get<int>();
            iv.break_period = s.at("break_period").get<int>();
            iv.lower_period = s.at("lower_period").get<int>();
            iv.upper_period = s.at("upper_period").get<int>();
            iv.level = s.at("level").get<double>();
            iv.zero_shift = s.at("zero_shift").get<bool>();
            rep.intervals.push_back(iv);
        }

        for (const json& s : root.at("fitted")) {
            FittedPoint pt;
            pt.period = s.at("period").get<int>();
            pt.observed = s.at("observed").get<double>();
            pt.fitted = s.at("fitted").get<double>();
            rep.fitted.push_back(pt);
        }
        return rep;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed report JSON: ") + e.what());
    }
}

std::string selection_csv(const BreakReport& report) {
    std::ostringstream os;
    write_csv_row(os, {"m", "feasible", "degenerate", "ssr", "bic", "chosen"});
    for (const auto& row : report.selection.rows) {
        write_csv_row(os, {std::to_string(row.m), row.feasible ? "1" : "0",
                           row.degenerate ? "1" : "0",
                           std::isnan(row.total_ssr) ? std::string()
                                                     : format_double(row.total_ssr),
                           std::isnan(row.bic) ? std::string() : format_double(row.bic),
                           row.m == report.selection.chosen_m ? "1" : "0"});
    }
    return os.str();
}

std::string breaks_csv(const BreakReport& report) {
    std::ostringstream os;
    write_csv_row(os, {"break_number", "index", "period", "lower", "upper", "level",
                       "zero_shift"});
    int number = 0;
    for (const auto& iv : report.intervals) {
        ++number;
        write_csv_row(os, {std::to_string(number), std::to_string(iv.break_index),
                           std::to_string(iv.break_period),
                           std::to_string(iv.lower_period),
                           std::to_string(iv.upper_period), format_double(iv.level),
                           iv.zero_shift ? "1" : "0"});
    }
    return os.str();
}

std::string fit_csv(const BreakReport& report) {
    std::ostringstream os;
    write_csv_row(os, {"period", "observed", "fitted"});
    for (const auto& pt : report.fitted) {
        write_csv_row(os, {std::to_string(pt.period), format_double(pt.observed),
                           format_double(pt.fitted)});
    }
    return os.str();
}

} // namespace shipbreak
