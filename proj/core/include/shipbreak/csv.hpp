#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shipbreak/panel/build.hpp"
#include "shipbreak/time_series.hpp"

namespace shipbreak {

// Shortest round-trip decimal rendering (via std::to_chars); parse_double
// restores the exact bits. All CSV/JSON output uses this so repeated runs
// are byte-identical.
std::string format_double(double v);
double parse_double(const std::string& s); // throws IoError on junk
int parse_int(const std::string& s);

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column position of `name`; throws IoError if absent.
    std::size_t col(const std::string& name) const;
};

// RFC-4180-ish reader: quoted fields, embedded commas/quotes/newlines.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path); // throws IoError

// Raw source observations: header source_id,key,year,value,unit.
std::vector<panel::SourceRow> read_source_csv(const std::string& path);

// CPI: header year,cpi.
panel::CpiTable read_cpi_csv(const std::string& path, int base_year = 1995);

// Finished panel: header key,year,value,unit,provenance.
void write_panel_csv(std::ostream& os, const std::vector<panel::PanelRow>& rows);
std::vector<panel::PanelRow> read_panel_csv(const std::string& path);

// Analysis input: accepts a finished panel or any CSV with a series-id
// column (key, series, or series_id), year, value. Returns one contiguous
// TimeSeries per key; a key with gap years is returned as-is up to the gap
// check in analysis (period grid must be unit-step, so gaps throw
// InvalidSeries at analysis time with the key named).
std::map<std::string, TimeSeries> read_series_csv(const std::string& path);

} // namespace shipbreak
