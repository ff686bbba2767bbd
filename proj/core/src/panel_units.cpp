#include "shipbreak/panel/units.hpp"

#include <array>
#include <utility>

namespace shipbreak::panel {

namespace {

constexpr std::array<std::pair<Unit, const char*>, 9> kUnitNames = {{
    {Unit::usd_per_100ton_mile, "usd_per_100ton_mile"},
    {Unit::usd_per_feu, "usd_per_feu"},
    {Unit::usd_per_teu, "usd_per_teu"},
    {Unit::index_1995_100, "index_1995_100"},
    {Unit::teu_capacity, "teu_capacity"},
    {Unit::thousand_teu, "thousand_teu"},
    {Unit::million_ton, "million_ton"},
    {Unit::usd_per_dwt_vessel, "usd_per_dwt_vessel"},
    {Unit::usd_per_ltd, "usd_per_ltd"},
}};

constexpr std::array<std::pair<Provenance, const char*>, 6> kProvenanceNames = {{
    {Provenance::observed, "observed"},
    {Provenance::calibrated, "calibrated"},
    {Provenance::ratio_imputed, "ratio_imputed"},
    {Provenance::interpolated, "interpolated"},
    {Provenance::allocated, "allocated"},
    {Provenance::capacity_derived, "capacity_derived"},
}};

} // namespace

Unit unit_from_string(const std::string& s) {
    for (const auto& [unit, name] : kUnitNames) {
        if (s == name) return unit;
    }
    throw ConfigError("unknown unit '" + s + "'");
}

std::string unit_to_string(Unit u) {
    for (const auto& [unit, name] : kUnitNames) {
        if (unit == u) return name;
    }
    throw ConfigError("unmapped unit enum value");
}

std::string provenance_to_string(Provenance p) {
    for (const auto& [prov, name] : kProvenanceNames) {
        if (prov == p) return name;
    }
    throw ConfigError("unmapped provenance enum value");
}

Provenance provenance_from_string(const std::string& s) {
    for (const auto& [prov, name] : kProvenanceNames) {
        if (s == name) return prov;
    }
    throw ConfigError("unknown provenance '" + s + "'");
}

CpiTable::CpiTable(std::map<int, double> values, int base_year)
    : values_(std::move(values)), base_year_(base_year) {}

double CpiTable::at(int year) const {
    auto it = values_.find(year);
    if (it == values_.end()) {
        throw MissingCpiYear("CPI table has no entry for year " +
                             std::to_string(year));
    }
    return it->second;
}

double CpiTable::adjust(double nominal, int year) const {
    const double base = at(base_year_);
    const double current = at(year);
    if (current == 0.0) {
        throw ZeroDenominator("CPI value for year " + std::to_string(year) +
                              " is zero");
    }
    return nominal * base / current;
}

double tonmile_rate_to_teu(double rate_per_100ton_mile, double miles,
                           double tons_per_teu) {
    if (rate_per_100ton_mile <= 0.0) {
        throw NonPositiveInput("ton-mile rate must be > 0");
    }
    if (miles <= 0.0) throw NonPositiveInput("route miles must be > 0");
    if (tons_per_teu <= 0.0) throw NonPositiveInput("tons per TEU must be > 0");
    return rate_per_100ton_mile * miles / 100.0 * tons_per_teu;
}

double feu_to_teu_price(double usd_per_feu, double feu_per_teu) {
    if (feu_per_teu <= 0.0) throw NonPositiveInput("TEU per FEU must be > 0");
    return usd_per_feu / feu_per_teu;
}

double newbuilding_per_teu(double usd_per_dwt, double bulk_to_container_factor) {
    if (usd_per_dwt <= 0.0) throw NonPositiveInput("newbuilding price must be > 0");
    if (bulk_to_container_factor <= 0.0) {
        throw NonPositiveInput("bulk-to-container factor must be > 0");
    }
    return usd_per_dwt * (12000.0 / 18000.0) / 10.0 / 1200.0 *
           bulk_to_container_factor;
}

CalibrationSolution secondhand_calibration() {
    CalibrationSolution cal;
    cal.a = 0.8 / 11.0;
    cal.x = (16.0 * cal.a - 2.7) / 2.0;
    return cal;
}

SecondhandConversion secondhand_per_teu(double raw_price, double liner_factor,
                                        const CalibrationSolution& cal) {
    SecondhandConversion conv;
    conv.age_adjusted = raw_price + 15.0 * cal.x;
    conv.per_dwt = conv.age_adjusted * cal.a;
    conv.per_teu = conv.per_dwt * (12000.0 / 16000.0) / 10.0 / 1200.0 * liner_factor;
    return conv;
}

double scrap_per_teu(double usd_per_ltd) {
    if (usd_per_ltd <= 0.0) throw NonPositiveInput("scrap price must be > 0");
    return usd_per_ltd / 4.0 * 10.0;
}

double capacity_to_million_teu(double teu_capacity, double utilization) {
    if (teu_capacity < 0.0) throw NonPositiveInput("capacity must be >= 0");
    if (!(utilization > 0.0) || utilization > 1.0) {
        throw OutOfRangeUtilization("utilization must lie in (0, 1]; got " +
                                    std::to_string(utilization));
    }
    return teu_capacity * utilization / 1.0e6;
}

double thousand_teu_to_million(double thousand_teu) { return thousand_teu / 1000.0; }

double million_tons_to_million_teu(double million_tons, double tons_per_teu) {
    if (tons_per_teu <= 0.0) throw NonPositiveInput("tons per TEU must be > 0");
    if (million_tons < 0.0) throw NonPositiveInput("tonnage must be >= 0");
    return million_tons / tons_per_teu;
}

} // namespace shipbreak::panel
