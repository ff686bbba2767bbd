#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shipbreak/panel/series_ops.hpp"
#include "shipbreak/panel/units.hpp"

namespace shipbreak::panel {

// One observation from a raw source file.
struct SourceRow {
    std::string source_id;
    std::string key;
    int year = 0;
    double value = 0.0;
    Unit unit = Unit::usd_per_teu;
};

// Unit-conversion parameters attached to a source id.
struct SourceConversion {
    std::string chain;                    // "", "newbuilding", "secondhand", "scrap"
    double factor = 1.0;                  // bulk/liner -> container level factor
    std::string miles_route;              // lookup into PanelConfig::route_miles
    std::optional<double> miles;          // explicit override
    std::optional<double> tons_per_teu;   // for ton-mile and million-ton units
    std::optional<double> utilization;    // for capacity units
};

// One source feeding a series; later entries are spliced onto the assembly
// via calibrate_overlap. overlap pairs are (year_in_assembly, year_in_source);
// when empty, all common years are used.
struct SourceStep {
    std::string id;
    std::vector<std::pair<int, int>> overlap;
};

struct RatioImputeSpec {
    std::string reference;   // source id (preferred) or series key
    std::vector<int> anchors;
    int fill_first = 0;
    int fill_last = 0;
};

struct SeriesSpec {
    std::string key;
    std::string kind;        // "price" or "quantity"
    std::vector<SourceStep> sources;
    std::optional<RatioImputeSpec> ratio_impute;
    bool interpolate = true;
    std::optional<bool> cpi_adjust;  // default: prices yes, quantities no
    std::optional<std::pair<int, int>> window;
};

// Splits a market-total series (rows of `source` under `total_key`) into the
// two directional series using the fixed ratio at the closest year where both
// directions are already observed.
struct AllocationSpec {
    std::string source;
    std::string total_key;
    std::string eastbound;
    std::string westbound;
};

struct PanelConfig {
    int base_year = 1995;
    double feu_per_teu = 2.0;
    double default_tons_per_teu = 10.0;
    double default_utilization = 1.0;
    std::map<std::string, double> route_miles;
    std::map<std::string, SourceConversion> conversions;
    std::vector<SeriesSpec> series;
    std::vector<AllocationSpec> allocations;
};

// Parses the JSON configuration document (see README for the schema).
// Throws ConfigError with field context on malformed input.
PanelConfig panel_config_from_json(const std::string& json_text);

struct PanelRow {
    std::string key;
    int year = 0;
    double value = 0.0;
    std::string unit;        // "usd1995_per_teu", "usd_per_teu", "million_teu"
    Provenance provenance = Provenance::observed;
};

struct PanelBuildResult {
    std::vector<PanelRow> rows; // sorted by (key, year)
    std::string log_json;       // every factor, anchor, fill, and warning
    std::vector<std::string> warnings;
};

// Runs the fixed pipeline: unit conversion -> splicing -> directional
// allocation -> ratio imputation -> interpolation -> CPI adjustment.
// Deterministic: identical inputs yield byte-identical rows and log.
// Empty inputs yield an empty panel and an empty log without error.
//
// Throws (first failure, with source/key/year context): ConfigError,
// MissingCpiYear, NoOverlap, ZeroDenominator, NoAnchor, ReferenceGap,
// ExtrapolationRequired, NonPositiveInput, OutOfRangeUtilization,
// ZeroReference.
PanelBuildResult build_panel(const std::vector<SourceRow>& sources,
                             const CpiTable& cpi, const PanelConfig& config);

} // namespace shipbreak::panel
