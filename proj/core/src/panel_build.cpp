#include "shipbreak/panel/build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "json.hpp"

namespace shipbreak::panel {

namespace {

using nlohmann::json;

// Relative spread across overlap ratios above which a splice is flagged.
constexpr double kSpliceWarnThreshold = 0.25;

bool is_price_unit(Unit u) {
    switch (u) {
        case Unit::usd_per_100ton_mile:
        case Unit::usd_per_feu:
        case Unit::usd_per_teu:
        case Unit::usd_per_dwt_vessel:
        case Unit::usd_per_ltd:
            return true;
        default:
            return false;
    }
}

struct BuildLog {
    json events = json::array();
    std::vector<std::string> warnings;

    void warn(const std::string& message) { warnings.push_back(message); }
};

struct ConvertedCell {
    int year = 0;
    double value = 0.0;
    Provenance provenance = Provenance::observed;
};

const SourceConversion& conversion_for(const PanelConfig& config,
                                       const std::string& source_id) {
    static const SourceConversion kDefault{};
    auto it = config.conversions.find(source_id);
    return it == config.conversions.end() ? kDefault : it->second;
}

double route_miles_for(const PanelConfig& config, const SourceConversion& conv,
                       const std::string& source_id) {
    if (conv.miles) return *conv.miles;
    if (!conv.miles_route.empty()) {
        auto it = config.route_miles.find(conv.miles_route);
        if (it == config.route_miles.end()) {
            throw ConfigError("source '" + source_id + "' references route '" +
                              conv.miles_route + "' which is not in route_miles");
        }
        return it->second;
    }
    throw ConfigError("source '" + source_id +
                      "' has ton-mile rates but neither miles nor miles_route");
}

// Converts one raw observation to the panel level (USD per TEU for prices,
// million TEU for quantities), logging chain intermediates.
ConvertedCell convert_row(const SourceRow& row, const PanelConfig& config,
                          const std::string& kind, BuildLog& log,
                          bool& calibration_logged) {
    const SourceConversion& conv = conversion_for(config, row.source_id);
    ConvertedCell out;
    out.year = row.year;

    if (!conv.chain.empty()) {
        if (kind != "price") {
            throw ConfigError("source '" + row.source_id + "' uses price chain '" +
                              conv.chain + "' but feeds quantity series '" +
                              row.key + "'");
        }
        if (conv.chain == "newbuilding") {
            out.value = newbuilding_per_teu(row.value, conv.factor);
        } else if (conv.chain == "secondhand") {
            const auto cal = secondhand_calibration();
            if (!calibration_logged) {
                calibration_logged = true;
                json ev;
                ev["type"] = "calibration";
                ev["source"] = row.source_id;
                ev["a"] = cal.a;
                ev["x"] = cal.x;
                ev["x_negative"] = cal.x < 0.0;
                log.events.push_back(std::move(ev));
                if (cal.x < 0.0) {
                    log.warn("secondhand age adjustment for source '" +
                             row.source_id + "' is negative; applied as-is");
                }
            }
            const auto chain = secondhand_per_teu(row.value, conv.factor, cal);
            json ev;
            ev["type"] = "secondhand_chain";
            ev["source"] = row.source_id;
            ev["year"] = row.year;
            ev["raw"] = row.value;
            ev["age_adjusted"] = chain.age_adjusted;
            ev["per_dwt"] = chain.per_dwt;
            ev["per_teu"] = chain.per_teu;
            log.events.push_back(std::move(ev));
            out.value = chain.per_teu;
        } else if (conv.chain == "scrap") {
            out.value = scrap_per_teu(row.value);
        } else {
            throw ConfigError("source '" + row.source_id + "' has unknown chain '" +
                              conv.chain + "'");
        }
        return out;
    }

    const bool price_unit = is_price_unit(row.unit);
    if (kind == "price" && !price_unit) {
        throw ConfigError("quantity unit '" + unit_to_string(row.unit) +
                          "' from source '" + row.source_id +
                          "' cannot feed price series '" + row.key + "'");
    }
    if (kind == "quantity" && price_unit) {
        throw ConfigError("price unit '" + unit_to_string(row.unit) +
                          "' from source '" + row.source_id +
                          "' cannot feed quantity series '" + row.key + "'");
    }

    switch (row.unit) {
        case Unit::usd_per_teu:
            out.value = row.value * conv.factor;
            break;
        case Unit::usd_per_feu:
            out.value = feu_to_teu_price(row.value, config.feu_per_teu) * conv.factor;
            break;
        case Unit::usd_per_100ton_mile:
            out.value = tonmile_rate_to_teu(
                            row.value, route_miles_for(config, conv, row.source_id),
                            conv.tons_per_teu.value_or(config.default_tons_per_teu)) *
                        conv.factor;
            break;
        case Unit::usd_per_ltd:
            out.value = scrap_per_teu(row.value) * conv.factor;
            break;
        case Unit::usd_per_dwt_vessel:
            throw ConfigError("source '" + row.source_id +
                              "' supplies usd_per_dwt_vessel; set its chain to "
                              "'newbuilding' or 'secondhand'");
        case Unit::teu_capacity:
            out.value = capacity_to_million_teu(
                row.value, conv.utilization.value_or(config.default_utilization));
            out.provenance = Provenance::capacity_derived;
            break;
        case Unit::thousand_teu:
            out.value = thousand_teu_to_million(row.value);
            break;
        case Unit::million_ton:
            out.value = million_tons_to_million_teu(
                row.value, conv.tons_per_teu.value_or(config.default_tons_per_teu));
            break;
        case Unit::index_1995_100:
            throw ConfigError("index unit from source '" + row.source_id +
                              "' has no direct panel conversion; use it as a "
                              "ratio_impute reference instead");
    }
    return out;
}

// Input rows grouped by source id, then key, preserving input order.
using SourceIndex =
    std::map<std::string, std::map<std::string, std::vector<SourceRow>>>;

SourceIndex index_sources(const std::vector<SourceRow>& rows) {
    SourceIndex idx;
    for (const auto& row : rows) idx[row.source_id][row.key].push_back(row);
    return idx;
}

void validate_spec(const SeriesSpec& spec) {
    if (spec.key.empty()) throw ConfigError("series with empty key");
    if (spec.kind != "price" && spec.kind != "quantity") {
        throw ConfigError("series '" + spec.key + "' has kind '" + spec.kind +
                          "'; expected 'price' or 'quantity'");
    }
    if (spec.sources.empty()) {
        throw ConfigError("series '" + spec.key + "' lists no sources");
    }
    if (spec.cpi_adjust.value_or(false) && spec.kind == "quantity") {
        throw ConfigError("series '" + spec.key +
                          "' is a quantity; cpi_adjust applies to prices only");
    }
}

SparseSeries assemble_series(const SeriesSpec& spec, const SourceIndex& index,
                             const PanelConfig& config, BuildLog& log) {
    SparseSeries assembly;
    assembly.key = spec.key;
    for (std::size_t step_idx = 0; step_idx < spec.sources.size(); ++step_idx) {
        const SourceStep& step = spec.sources[step_idx];
        auto sit = index.find(step.id);
        const std::vector<SourceRow>* rows = nullptr;
        if (sit != index.end()) {
            auto kit = sit->second.find(spec.key);
            if (kit != sit->second.end()) rows = &kit->second;
        }
        if (rows == nullptr || rows->empty()) {
            throw ConfigError("source '" + step.id + "' has no rows for series '" +
                              spec.key + "'");
        }

        bool calibration_logged = false;
        SparseSeries incoming;
        incoming.key = step.id;
        for (const auto& row : *rows) {
            auto cell = convert_row(row, config, spec.kind, log, calibration_logged);
            incoming.cells[cell.year] = Cell{cell.value, cell.provenance};
        }

        if (step_idx == 0) {
            assembly.cells = std::move(incoming.cells);
            continue;
        }

        std::vector<std::pair<int, int>> overlap = step.overlap;
        if (overlap.empty()) {
            for (const auto& [year, cell] : incoming.cells) {
                if (assembly.has(year)) overlap.emplace_back(year, year);
            }
        }
        auto cal = calibrate_overlap(assembly, incoming, overlap);

        json ev;
        ev["type"] = "splice";
        ev["series"] = spec.key;
        ev["source"] = step.id;
        ev["factor"] = cal.factor;
        ev["max_discontinuity"] = cal.max_discontinuity;
        ev["adjacent_years"] = cal.adjacent_years;
        json filled = json::array();
        for (const auto& [year, cell] : incoming.cells) {
            if (assembly.has(year)) continue;
            assembly.cells[year] = Cell{cell.value * cal.factor, Provenance::calibrated};
            filled.push_back(year);
        }
        ev["filled"] = std::move(filled);
        log.events.push_back(std::move(ev));

        if (cal.max_discontinuity > kSpliceWarnThreshold) {
            log.warn("splice of source '" + step.id + "' onto series '" + spec.key +
                     "' has overlap ratios varying by more than 25% around the "
                     "factor");
        }
    }
    return assembly;
}

void run_allocations(const PanelConfig& config, const SourceIndex& index,
                     std::map<std::string, SparseSeries>& assemblies,
                     BuildLog& log) {
    for (const auto& alloc : config.allocations) {
        auto sit = index.find(alloc.source);
        const std::vector<SourceRow>* totals = nullptr;
        if (sit != index.end()) {
            auto kit = sit->second.find(alloc.total_key);
            if (kit != sit->second.end()) totals = &kit->second;
        }
        if (totals == nullptr || totals->empty()) {
            throw ConfigError("allocation source '" + alloc.source +
                              "' has no rows under total key '" + alloc.total_key +
                              "'");
        }
        auto east_it = assemblies.find(alloc.eastbound);
        auto west_it = assemblies.find(alloc.westbound);
        if (east_it == assemblies.end() || west_it == assemblies.end()) {
            throw ConfigError("allocation targets '" + alloc.eastbound + "'/'" +
                              alloc.westbound + "' must both be configured series");
        }
        SparseSeries& east = east_it->second;
        SparseSeries& west = west_it->second;

        // Reference years where both directions already hold values, for the
        // closest-year ratio lookup.
        std::vector<int> both;
        for (const auto& [year, cell] : east.cells) {
            if (west.has(year)) both.push_back(year);
        }

        std::vector<SourceRow> ordered = *totals;
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const SourceRow& a, const SourceRow& b) {
                             return a.year < b.year;
                         });
        bool calibration_logged = false;
        for (const auto& row : ordered) {
            if (east.has(row.year) || west.has(row.year)) continue;
            if (both.empty()) {
                throw NoOverlap("allocation of '" + alloc.total_key +
                                "' has no year where both '" + alloc.eastbound +
                                "' and '" + alloc.westbound + "' are observed");
            }
            int ref = both.front();
            for (int y : both) {
                if (std::abs(y - row.year) < std::abs(ref - row.year)) ref = y;
            }
            auto total =
                convert_row(row, config, "quantity", log, calibration_logged);
            auto split =
                allocate_directional(total.value, east.value(ref), west.value(ref));
            east.cells[row.year] = Cell{split.east, Provenance::allocated};
            west.cells[row.year] = Cell{split.west, Provenance::allocated};

            json ev;
            ev["type"] = "allocate";
            ev["year"] = row.year;
            ev["reference_year"] = ref;
            ev["total_key"] = alloc.total_key;
            ev["eastbound"] = alloc.eastbound;
            ev["westbound"] = alloc.westbound;
            ev["total"] = total.value;
            ev["east"] = split.east;
            ev["west"] = split.west;
            log.events.push_back(std::move(ev));
        }
    }
}

// Reference for ratio imputation: a source id (raw values, single key) if one
// matches, otherwise an already-assembled series key.
SparseSeries ratio_reference(const std::string& name, const SourceIndex& index,
                             const std::map<std::string, SparseSeries>& assemblies) {
    auto sit = index.find(name);
    if (sit != index.end()) {
        if (sit->second.size() != 1) {
            throw ConfigError("ratio reference source '" + name +
                              "' carries more than one key");
        }
        SparseSeries ref;
        ref.key = name;
        for (const auto& row : sit->second.begin()->second) {
            ref.cells[row.year] = Cell{row.value, Provenance::observed};
        }
        return ref;
    }
    auto ait = assemblies.find(name);
    if (ait != assemblies.end()) return ait->second;
    throw ConfigError("ratio reference '" + name +
                      "' is neither a source id nor a series key");
}

void run_ratio_imputes(const PanelConfig& config, const SourceIndex& index,
                       std::map<std::string, SparseSeries>& assemblies,
                       BuildLog& log) {
    for (const auto& spec : config.series) {
        if (!spec.ratio_impute) continue;
        const RatioImputeSpec& ri = *spec.ratio_impute;
        SparseSeries& target = assemblies.at(spec.key);
        SparseSeries ref = ratio_reference(ri.reference, index, assemblies);
        if (ri.fill_last < ri.fill_first) {
            throw ConfigError("series '" + spec.key +
                              "' has an empty ratio_impute fill range");
        }
        std::vector<int> fill_years;
        for (int y = ri.fill_first; y <= ri.fill_last; ++y) fill_years.push_back(y);
        json filled = json::array();
        for (int y : fill_years) {
            if (!target.has(y)) filled.push_back(y);
        }
        double ratio = fixed_ratio_impute(target, ref, ri.anchors, fill_years);

        json ev;
        ev["type"] = "ratio_impute";
        ev["series"] = spec.key;
        ev["reference"] = ri.reference;
        ev["ratio"] = ratio;
        ev["anchors"] = ri.anchors;
        ev["filled"] = std::move(filled);
        log.events.push_back(std::move(ev));
    }
}

void run_interpolation(const PanelConfig& config,
                       std::map<std::string, SparseSeries>& assemblies,
                       BuildLog& log) {
    for (const auto& spec : config.series) {
        if (!spec.interpolate) continue;
        SparseSeries& series = assemblies.at(spec.key);
        if (series.cells.size() < 2) continue;
        auto filled = interpolate_linear(series);
        if (filled.empty()) continue;
        json ev;
        ev["type"] = "interpolate";
        ev["series"] = spec.key;
        ev["years"] = filled;
        log.events.push_back(std::move(ev));
    }
}

std::vector<PanelRow> emit_rows(const PanelConfig& config, const CpiTable& cpi,
                                const std::map<std::string, SparseSeries>& assemblies) {
    std::vector<PanelRow> rows;
    for (const auto& spec : config.series) {
        const SparseSeries& series = assemblies.at(spec.key);
        const bool is_price = spec.kind == "price";
        const bool adjust = spec.cpi_adjust.value_or(is_price);
        std::string unit;
        if (!is_price) {
            unit = "million_teu";
        } else if (adjust) {
            unit = "usd" + std::to_string(config.base_year) + "_per_teu";
        } else {
            unit = "usd_per_teu";
        }
        for (const auto& [year, cell] : series.cells) {
            if (spec.window &&
                (year < spec.window->first || year > spec.window->second)) {
                continue;
            }
            if (is_price && !(cell.value > 0.0)) {
                throw NonPositiveInput("price series '" + spec.key + "' year " +
                                       std::to_string(year) + " resolves to " +
                                       std::to_string(cell.value) +
                                       "; prices must be > 0");
            }
            if (!is_price && !(cell.value >= 0.0)) {
                throw NonPositiveInput("quantity series '" + spec.key + "' year " +
                                       std::to_string(year) + " resolves to " +
                                       std::to_string(cell.value) +
                                       "; quantities must be >= 0");
            }
            PanelRow out;
            out.key = spec.key;
            out.year = year;
            out.value = adjust ? cpi.adjust(cell.value, year) : cell.value;
            out.unit = unit;
            out.provenance = cell.provenance;
            rows.push_back(std::move(out));
        }
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PanelRow& a, const PanelRow& b) {
                         if (a.key != b.key) return a.key < b.key;
                         return a.year < b.year;
                     });
    return rows;
}

} // namespace

PanelBuildResult build_panel(const std::vector<SourceRow>& sources,
                             const CpiTable& cpi, const PanelConfig& config) {
    for (const auto& spec : config.series) validate_spec(spec);
    {
        std::set<std::string> keys;
        for (const auto& spec : config.series) {
            if (!keys.insert(spec.key).second) {
                throw ConfigError("series '" + spec.key + "' is configured twice");
            }
        }
    }

    BuildLog log;
    SourceIndex index = index_sources(sources);

    std::map<std::string, SparseSeries> assemblies;
    for (const auto& spec : config.series) {
        assemblies.emplace(spec.key, assemble_series(spec, index, config, log));
    }

    run_allocations(config, index, assemblies, log);
    run_ratio_imputes(config, index, assemblies, log);
    run_interpolation(config, assemblies, log);

    PanelBuildResult result;
    result.rows = emit_rows(config, cpi, assemblies);

    json root;
    root["events"] = std::move(log.events);
    root["warnings"] = log.warnings;
    result.log_json = root.dump(2) + "\n";
    result.warnings = std::move(log.warnings);
    return result;
}

namespace {

json parse_config_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid panel config JSON: ") + e.what());
    }
}

std::pair<int, int> int_pair(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) {
        throw ConfigError("'" + field + "' must be a two-element [first, last] array");
    }
    return {j.at(0).get<int>(), j.at(1).get<int>()};
}

SourceStep source_step_from_json(const json& j, const std::string& series_key) {
    SourceStep step;
    if (j.is_string()) {
        step.id = j.get<std::string>();
        return step;
    }
    if (!j.is_object() || !j.contains("id")) {
        throw ConfigError("series '" + series_key +
                          "': each source must be a string id or an object with "
                          "an 'id' field");
    }
    step.id = j.at("id").get<std::string>();
    if (j.contains("overlap")) {
        for (const json& pair : j.at("overlap")) {
            step.overlap.push_back(int_pair(pair, "overlap entry"));
        }
    }
    return step;
}

} // namespace

PanelConfig panel_config_from_json(const std::string& json_text) {
    const json root = parse_config_json(json_text);
    if (!root.is_object()) throw ConfigError("panel config must be a JSON object");
    try {
        PanelConfig cfg;
        cfg.base_year = root.value("base_year", cfg.base_year);
        cfg.feu_per_teu = root.value("feu_per_teu", cfg.feu_per_teu);
        cfg.default_tons_per_teu =
            root.value("default_tons_per_teu", cfg.default_tons_per_teu);
        cfg.default_utilization =
            root.value("default_utilization", cfg.default_utilization);

        if (root.contains("route_miles")) {
            for (const auto& [name, miles] : root.at("route_miles").items()) {
                cfg.route_miles[name] = miles.get<double>();
            }
        }

        if (root.contains("conversions")) {
            for (const auto& [id, spec] : root.at("conversions").items()) {
                SourceConversion conv;
                conv.chain = spec.value("chain", std::string());
                conv.factor = spec.value("factor", 1.0);
                conv.miles_route = spec.value("miles_route", std::string());
                if (spec.contains("miles")) conv.miles = spec.at("miles").get<double>();
                if (spec.contains("tons_per_teu")) {
                    conv.tons_per_teu = spec.at("tons_per_teu").get<double>();
                }
                if (spec.contains("utilization")) {
                    conv.utilization = spec.at("utilization").get<double>();
                }
                cfg.conversions[id] = std::move(conv);
            }
        }

        if (root.contains("series")) {
            for (const json& s : root.at("series")) {
                SeriesSpec spec;
                if (!s.contains("key")) {
                    throw ConfigError("series entry without a 'key' field");
                }
                spec.key = s.at("key").get<std::string>();
                if (!s.contains("kind")) {
                    throw ConfigError("series '" + spec.key +
                                      "' is missing the 'kind' field");
                }
                spec.kind = s.at("kind").get<std::string>();
                if (s.contains("sources")) {
                    for (const json& src : s.at("sources")) {
                        spec.sources.push_back(source_step_from_json(src, spec.key));
                    }
                }
                if (s.contains("ratio_impute")) {
                    const json& r = s.at("ratio_impute");
                    RatioImputeSpec ri;
                    if (!r.contains("reference")) {
                        throw ConfigError("series '" + spec.key +
                                          "': ratio_impute needs a 'reference'");
                    }
                    ri.reference = r.at("reference").get<std::string>();
                    if (r.contains("anchors")) {
                        ri.anchors = r.at("anchors").get<std::vector<int>>();
                    }
                    if (!r.contains("fill")) {
                        throw ConfigError("series '" + spec.key +
                                          "': ratio_impute needs a 'fill' range");
                    }
                    auto [a, b] = int_pair(r.at("fill"), "fill");
                    ri.fill_first = a;
                    ri.fill_last = b;
                    spec.ratio_impute = std::move(ri);
                }
                spec.interpolate = s.value("interpolate", true);
                if (s.contains("cpi_adjust")) {
                    spec.cpi_adjust = s.at("cpi_adjust").get<bool>();
                }
                if (s.contains("window")) {
                    spec.window = int_pair(s.at("window"), "window");
                }
                cfg.series.push_back(std::move(spec));
            }
        }

        if (root.contains("allocations")) {
            for (const json& a : root.at("allocations")) {
                AllocationSpec alloc;
                for (const char* field : {"source", "total_key", "eastbound",
                                          "westbound"}) {
                    if (!a.contains(field)) {
                        throw ConfigError(std::string("allocation entry missing '") +
                                          field + "'");
                    }
                }
                alloc.source = a.at("source").get<std::string>();
                alloc.total_key = a.at("total_key").get<std::string>();
                alloc.eastbound = a.at("eastbound").get<std::string>();
                alloc.westbound = a.at("westbound").get<std::string>();
                cfg.allocations.push_back(std::move(alloc));
            }
        }
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed panel config: ") + e.what());
    }
}

} // namespace shipbreak::panel
