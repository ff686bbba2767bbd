#pragma once

#include <map>
#include <string>

#include "shipbreak/errors.hpp"

namespace shipbreak::panel {

// Source measurement units accepted by the builder.
enum class Unit {
    usd_per_100ton_mile,
    usd_per_feu,
    usd_per_teu,
    index_1995_100,
    teu_capacity,
    thousand_teu,
    million_ton,
    usd_per_dwt_vessel,
    usd_per_ltd,
};

Unit unit_from_string(const std::string& s); // throws ConfigError on unknown
std::string unit_to_string(Unit u);

// How each value came to be in the finished panel.
enum class Provenance {
    observed,
    calibrated,
    ratio_imputed,
    interpolated,
    allocated,
    capacity_derived,
};

std::string provenance_to_string(Provenance p);
Provenance provenance_from_string(const std::string& s); // throws ConfigError

// CPI index keyed by year. Deflation to base-year dollars:
//   real = nominal * cpi(base_year) / cpi(year).
class CpiTable {
public:
    CpiTable() = default;
    explicit CpiTable(std::map<int, double> values, int base_year = 1995);

    // Errors: MissingCpiYear if year or the base year is absent;
    // ZeroDenominator if cpi(year) == 0.
    double adjust(double nominal, int year) const;
    double at(int year) const;
    bool has(int year) const { return values_.count(year) > 0; }
    int base_year() const { return base_year_; }

private:
    std::map<int, double> values_;
    int base_year_ = 1995;
};

// --- price conversions to USD per TEU ------------------------------------

// Liner rate quoted in USD per 100 ton-miles over a route of `miles`
// nautical miles carrying `tons_per_teu` tons per TEU:
//   per_teu = rate * miles / 100 * tons_per_teu.
// Errors: NonPositiveInput if rate, miles, or tons_per_teu <= 0.
double tonmile_rate_to_teu(double rate_per_100ton_mile, double miles,
                           double tons_per_teu);

// USD per FEU -> USD per TEU (one FEU carries `feu_per_teu` TEU, default 2).
double feu_to_teu_price(double usd_per_feu, double feu_per_teu = 2.0);

// Newbuilding vessel price (USD per dwt, 18k-dwt bulk reference vessel) to
// container freight per TEU:
//   per_teu = p * (12000/18000) / 10 / 1200 * bulk_to_container_factor.
// Errors: NonPositiveInput if p or the factor <= 0.
double newbuilding_per_teu(double usd_per_dwt, double bulk_to_container_factor);

// Calibration of the secondhand price mapping: the affine per-dwt map
// value = (raw + age*X) * a is pinned by two known vessel sales,
//   2.7 + 2*X = 16.0*a  and  0.8 + 0*X = 11*a,
// giving a = 0.8/11 and X = (16*a - 2.7)/2 (negative; callers flag it).
struct CalibrationSolution {
    double a = 0.0;
    double x = 0.0;
};
CalibrationSolution secondhand_calibration();

// Full secondhand chain for a 15-year-old 16k-dwt reference vessel, raw price
// in USD millions:
//   per_dwt   = (raw + 15*X) * a
//   per_teu   = per_dwt * (12000/16000) / 10 / 1200 * liner_factor
// Intermediates are exposed for build-log surfacing.
struct SecondhandConversion {
    double age_adjusted = 0.0; // raw + 15*X
    double per_dwt = 0.0;      // * a
    double per_teu = 0.0;      // final
};
SecondhandConversion secondhand_per_teu(double raw_price, double liner_factor,
                                        const CalibrationSolution& cal);

// Scrap value quoted per LTD (long ton displacement): per_teu = p / 4 * 10.
// Errors: NonPositiveInput if p <= 0.
double scrap_per_teu(double usd_per_ltd);

// --- quantity conversions to million TEU ---------------------------------

// Deployed capacity (TEU) times utilization in (0, 1]; yields million TEU.
// Errors: OutOfRangeUtilization unless 0 < utilization <= 1;
// NonPositiveInput if capacity < 0.
double capacity_to_million_teu(double teu_capacity, double utilization);

double thousand_teu_to_million(double thousand_teu);

// Million tons over `tons_per_teu` tons per TEU. Errors: NonPositiveInput
// if tons_per_teu <= 0 or million_tons < 0.
double million_tons_to_million_teu(double million_tons, double tons_per_teu);

} // namespace shipbreak::panel
