// shipbreak command-line front end.
//
// Subcommands:
//   panel-build  raw source observations -> panel.csv + build_log.json
//   breaks       per-series break detection -> <key>_report.json/_*.csv + summary.json
//   stats        per-series and pooled moments -> stats.csv
//
// Exit codes: 0 success (including an empty series selection, which only
// warns), 1 usage or configuration error, 2 data error (unreadable input or
// every selected series failing), 3 partial failure (some series succeeded,
// some failed; summary.json lists both sides).

#include <cstdlib>
#include <cxxabi.h>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <typeinfo>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shipbreak/csv.hpp"
#include "shipbreak/panel/build.hpp"
#include "shipbreak/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Unqualified class name of a caught exception, e.g. "SeriesTooShort".
std::string error_type_name(const std::exception& e) {
    int status = 0;
    char* demangled =
        abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
    std::string full = (status == 0 && demangled) ? demangled : typeid(e).name();
    std::free(demangled);
    auto pos = full.rfind("::");
    return pos == std::string::npos ? full : full.substr(pos + 2);
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) {
        throw shipbreak::IoError("cannot read '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// All outputs go through a temp file + rename so a crash mid-write never
// leaves a truncated artifact behind.
void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out.good()) {
            throw shipbreak::IoError("cannot write '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

// Output directory precedence: --out flag, then SHIPBREAK_OUT_DIR, then the
// config file's "out" entry, then ./out.
std::string resolve_out_dir(const std::string& flag_value, bool flag_given,
                            const std::optional<std::string>& config_out) {
    if (flag_given) return flag_value;
    if (const char* env = std::getenv("SHIPBREAK_OUT_DIR"); env != nullptr && *env) {
        return env;
    }
    if (config_out) return *config_out;
    return "out";
}

std::pair<int, int> parse_window(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw shipbreak::ConfigError("window must look like FIRST:LAST; got '" +
                                     text + "'");
    }
    try {
        return {shipbreak::parse_int(text.substr(0, colon)),
                shipbreak::parse_int(text.substr(colon + 1))};
    } catch (const shipbreak::IoError&) {
        throw shipbreak::ConfigError("window bounds must be integers; got '" +
                                     text + "'");
    }
}

// ---------------------------------------------------------------- panel-build

int run_panel_build(const std::string& input, const std::string& cpi_path,
                    bool cpi_given, const std::string& config_path,
                    const std::string& out_flag, bool out_given) {
    std::string config_text;
    try {
        config_text = slurp_file(config_path);
    } catch (const shipbreak::IoError& e) {
        throw shipbreak::ConfigError(e.what());
    }
    auto config = shipbreak::panel::panel_config_from_json(config_text);

    auto sources = shipbreak::read_source_csv(input);
    shipbreak::panel::CpiTable cpi({}, config.base_year);
    if (cpi_given) cpi = shipbreak::read_cpi_csv(cpi_path, config.base_year);

    auto result = shipbreak::panel::build_panel(sources, cpi, config);
    for (const auto& warning : result.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }

    const fs::path out_dir = resolve_out_dir(out_flag, out_given, std::nullopt);
    std::ostringstream panel_text;
    shipbreak::write_panel_csv(panel_text, result.rows);
    write_file_atomic(out_dir / "panel.csv", panel_text.str());
    write_file_atomic(out_dir / "build_log.json", result.log_json);
    std::cout << "wrote " << (out_dir / "panel.csv").string() << " ("
              << result.rows.size() << " rows)\n";
    return 0;
}

// --------------------------------------------------------------------- breaks

struct BreaksSettings {
    shipbreak::AnalysisConfig config;
    std::vector<std::string> series;
    std::optional<std::string> out;
};

BreaksSettings load_breaks_config(const std::string& path) {
    BreaksSettings s;
    std::string text;
    try {
        text = slurp_file(path);
    } catch (const shipbreak::IoError& e) {
        throw shipbreak::ConfigError(e.what());
    }
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw shipbreak::ConfigError("invalid analysis config JSON: " +
                                     std::string(e.what()));
    }
    try {
        s.config.min_len = root.value("min_len", s.config.min_len);
        s.config.max_m = root.value("max_m", s.config.max_m);
        s.config.level = root.value("level", s.config.level);
        s.config.flags.het_regressors =
            root.value("het_regressors", s.config.flags.het_regressors);
        s.config.flags.het_errors =
            root.value("het_errors", s.config.flags.het_errors);
        if (root.contains("bandwidth") && !root.at("bandwidth").is_null()) {
            s.config.bandwidth = root.at("bandwidth").get<int>();
        }
        if (root.contains("window") && !root.at("window").is_null()) {
            const json& w = root.at("window");
            if (!w.is_array() || w.size() != 2) {
                throw shipbreak::ConfigError(
                    "config 'window' must be a [first, last] array");
            }
            s.config.window =
                std::make_pair(w.at(0).get<int>(), w.at(1).get<int>());
        }
        if (root.contains("series")) {
            s.series = root.at("series").get<std::vector<std::string>>();
        }
        if (root.contains("out")) s.out = root.at("out").get<std::string>();
    } catch (const json::exception& e) {
        throw shipbreak::ConfigError("malformed analysis config: " +
                                     std::string(e.what()));
    }
    return s;
}

struct BreaksCli {
    std::string input;
    std::string config_path;
    std::string out;
    std::vector<std::string> series;
    int min_len = 4;
    int max_m = 8;
    double level = 0.95;
    std::string window;
    int bandwidth = 0;
    bool het_reg = true;
    bool het_err = true;

    CLI::Option* opt_config = nullptr;
    CLI::Option* opt_out = nullptr;
    CLI::Option* opt_series = nullptr;
    CLI::Option* opt_min_len = nullptr;
    CLI::Option* opt_max_m = nullptr;
    CLI::Option* opt_level = nullptr;
    CLI::Option* opt_window = nullptr;
    CLI::Option* opt_bandwidth = nullptr;
    CLI::Option* opt_het_reg = nullptr;
    CLI::Option* opt_het_err = nullptr;
};

int run_breaks(const BreaksCli& cli) {
    BreaksSettings settings;
    if (cli.opt_config->count() > 0) {
        settings = load_breaks_config(cli.config_path);
    }
    // Command-line flags beat the config file.
    if (cli.opt_min_len->count() > 0) settings.config.min_len = cli.min_len;
    if (cli.opt_max_m->count() > 0) settings.config.max_m = cli.max_m;
    if (cli.opt_level->count() > 0) settings.config.level = cli.level;
    if (cli.opt_bandwidth->count() > 0) settings.config.bandwidth = cli.bandwidth;
    if (cli.opt_window->count() > 0) {
        settings.config.window = parse_window(cli.window);
    }
    if (cli.opt_het_reg->count() > 0) {
        settings.config.flags.het_regressors = cli.het_reg;
    }
    if (cli.opt_het_err->count() > 0) settings.config.flags.het_errors = cli.het_err;
    if (cli.opt_series->count() > 0) settings.series = cli.series;

    auto all_series = shipbreak::read_series_csv(cli.input);

    std::vector<std::string> keys;
    if (settings.series.empty()) {
        for (const auto& [key, unused] : all_series) keys.push_back(key);
    } else {
        for (const auto& key : settings.series) {
            if (all_series.count(key) == 0) {
                std::cerr << "warning: series '" << key
                          << "' is not present in " << cli.input << "\n";
                continue;
            }
            keys.push_back(key);
        }
    }
    if (keys.empty()) {
        std::cerr << "warning: no series selected; nothing to do\n";
        return 0;
    }

    const fs::path out_dir =
        resolve_out_dir(cli.out, cli.opt_out->count() > 0, settings.out);

    json succeeded = json::array();
    json failed = json::array();
    for (const auto& key : keys) {
        try {
            auto report = shipbreak::analyze_series(all_series.at(key),
                                                    settings.config);
            write_file_atomic(out_dir / (key + "_report.json"),
                              shipbreak::break_report_to_json(report));
            write_file_atomic(out_dir / (key + "_selection.csv"),
                              shipbreak::selection_csv(report));
            write_file_atomic(out_dir / (key + "_breaks.csv"),
                              shipbreak::breaks_csv(report));
            write_file_atomic(out_dir / (key + "_fit.csv"),
                              shipbreak::fit_csv(report));
            succeeded.push_back(key);
        } catch (const shipbreak::Error& e) {
            std::cerr << "error: series '" << key << "': " << e.what() << "\n";
            json entry;
            entry["series"] = key;
            entry["error"] = error_type_name(e);
            entry["message"] = e.what();
            failed.push_back(std::move(entry));
        }
    }

    json summary;
    summary["succeeded"] = succeeded;
    summary["failed"] = failed;
    write_file_atomic(out_dir / "summary.json", summary.dump(2) + "\n");

    if (failed.empty()) return 0;
    if (succeeded.empty()) return 2;
    return 3;
}

// ---------------------------------------------------------------------- stats

int run_stats(const std::string& input, const std::string& out_flag,
              bool out_given) {
    auto rows = shipbreak::read_panel_csv(input);

    // unit group -> series key -> values in year order (the panel is sorted).
    std::map<std::string, std::map<std::string, std::vector<double>>> groups;
    for (const auto& row : rows) groups[row.unit][row.key].push_back(row.value);

    std::ostringstream os;
    shipbreak::write_csv_row(os, {"group", "series", "n", "mean", "sd", "min",
                                  "max"});
    for (const auto& [unit, by_key] : groups) {
        std::vector<double> pooled;
        for (const auto& [key, values] : by_key) {
            pooled.insert(pooled.end(), values.begin(), values.end());
            if (values.size() < 2) {
                std::cerr << "warning: series '" << key
                          << "' has fewer than 2 observations; skipped\n";
                continue;
            }
            auto st = shipbreak::panel::summary_stats(values);
            shipbreak::write_csv_row(
                os, {unit, key, std::to_string(st.n),
                     shipbreak::format_double(st.mean),
                     shipbreak::format_double(st.sd),
                     shipbreak::format_double(st.min),
                     shipbreak::format_double(st.max)});
        }
        if (pooled.size() >= 2) {
            auto st = shipbreak::panel::summary_stats(pooled);
            shipbreak::write_csv_row(
                os, {unit, "ALL", std::to_string(st.n),
                     shipbreak::format_double(st.mean),
                     shipbreak::format_double(st.sd),
                     shipbreak::format_double(st.min),
                     shipbreak::format_double(st.max)});
        }
    }

    const fs::path out_dir = resolve_out_dir(out_flag, out_given, std::nullopt);
    write_file_atomic(out_dir / "stats.csv", os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Container freight panel assembly and structural break analysis"};
    app.require_subcommand(1);

    std::string pb_input, pb_cpi, pb_config, pb_out;
    auto* pb = app.add_subcommand(
        "panel-build", "Assemble the panel from raw source observations");
    pb->add_option("--input", pb_input,
                   "Source CSV (source_id,key,year,value,unit)")
        ->required();
    auto* pb_cpi_opt = pb->add_option("--cpi", pb_cpi, "CPI CSV (year,cpi)");
    pb->add_option("--config", pb_config, "Panel configuration JSON")->required();
    auto* pb_out_opt = pb->add_option("--out", pb_out, "Output directory");

    BreaksCli br_cli;
    auto* br = app.add_subcommand("breaks",
                                  "Detect structural breaks series by series");
    br->add_option("--input", br_cli.input,
                   "Series CSV (key/series/series_id, year, value)")
        ->required();
    br_cli.opt_config =
        br->add_option("--config", br_cli.config_path, "Analysis config JSON");
    br_cli.opt_out = br->add_option("--out", br_cli.out, "Output directory");
    br_cli.opt_series = br->add_option(
        "--series", br_cli.series, "Restrict the run to these series keys");
    br_cli.opt_min_len = br->add_option("--min-len", br_cli.min_len,
                                        "Minimum regime length (default 4)");
    br_cli.opt_max_m = br->add_option(
        "--max-m", br_cli.max_m, "Largest break count considered (default 8)");
    br_cli.opt_level = br->add_option(
        "--level", br_cli.level, "Confidence level for break dates (default 0.95)");
    br_cli.opt_window = br->add_option(
        "--window", br_cli.window, "Restrict the sample to FIRST:LAST periods");
    br_cli.opt_bandwidth = br->add_option(
        "--bandwidth", br_cli.bandwidth,
        "Bartlett kernel bandwidth (default: automatic rule)");
    br_cli.opt_het_reg = br->add_flag(
        "--het-reg,!--no-het-reg", br_cli.het_reg,
        "Allow regressor moments to differ across regimes (default on)");
    br_cli.opt_het_err = br->add_flag(
        "--het-err,!--no-het-err", br_cli.het_err,
        "Allow error moments to differ across regimes (default on)");

    std::string st_input, st_out;
    auto* st = app.add_subcommand(
        "stats", "Summary statistics per series and pooled per unit group");
    st->add_option("--input", st_input, "Panel CSV")->required();
    auto* st_out_opt = st->add_option("--out", st_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (pb->parsed()) {
            return run_panel_build(pb_input, pb_cpi, pb_cpi_opt->count() > 0,
                                   pb_config, pb_out, pb_out_opt->count() > 0);
        }
        if (br->parsed()) {
            return run_breaks(br_cli);
        }
        if (st->parsed()) {
            return run_stats(st_input, st_out, st_out_opt->count() > 0);
        }
    } catch (const shipbreak::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const shipbreak::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
