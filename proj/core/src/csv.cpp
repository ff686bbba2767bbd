#include "shipbreak/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <system_error>

namespace shipbreak {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || s.empty()) {
        throw IoError("not a number: '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || s.empty()) {
        throw IoError("not an integer: '" + s + "'");
    }
    return v;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(fields[i]);
    }
    os << '\n';
}

std::size_t CsvTable::col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw IoError("missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_char = false;
    auto end_field = [&] {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        if (table.header.empty()) {
            table.header = record;
        } else {
            if (record.size() != table.header.size()) {
                throw IoError("row " + std::to_string(table.rows.size() + 2) +
                              " has " + std::to_string(record.size()) +
                              " fields; header has " +
                              std::to_string(table.header.size()));
            }
            table.rows.push_back(record);
        }
        record.clear();
        any_char = false;
    };
    char c;
    while (is.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (is.peek() == '"') {
                    is.get(c);
                    field += '"';
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            any_char = true;
            continue;
        }
        switch (c) {
            case '"': in_quotes = true; any_char = true; break;
            case ',': end_field(); any_char = true; break;
            case '\r': break;
            case '\n':
                if (any_char || !record.empty() || !field.empty()) end_record();
                break;
            default: field += c; any_char = true; break;
        }
    }
    if (in_quotes) throw IoError("unterminated quoted field");
    if (any_char || !record.empty() || !field.empty()) end_record();
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw IoError("cannot open '" + path + "'");
    try {
        return read_csv(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

std::vector<panel::SourceRow> read_source_csv(const std::string& path) {
    auto table = read_csv_file(path);
    std::vector<panel::SourceRow> out;
    try {
        const auto c_src = table.col("source_id");
        const auto c_key = table.col("key");
        const auto c_year = table.col("year");
        const auto c_value = table.col("value");
        const auto c_unit = table.col("unit");
        for (const auto& row : table.rows) {
            panel::SourceRow r;
            r.source_id = row[c_src];
            r.key = row[c_key];
            r.year = parse_int(row[c_year]);
            r.value = parse_double(row[c_value]);
            r.unit = panel::unit_from_string(row[c_unit]);
            out.push_back(std::move(r));
        }
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
    return out;
}

panel::CpiTable read_cpi_csv(const std::string& path, int base_year) {
    auto table = read_csv_file(path);
    std::map<int, double> values;
    try {
        const auto c_year = table.col("year");
        const auto c_cpi = table.col("cpi");
        for (const auto& row : table.rows) {
            values[parse_int(row[c_year])] = parse_double(row[c_cpi]);
        }
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
    return panel::CpiTable(std::move(values), base_year);
}

void write_panel_csv(std::ostream& os, const std::vector<panel::PanelRow>& rows) {
    write_csv_row(os, {"key", "year", "value", "unit", "provenance"});
    for (const auto& r : rows) {
        write_csv_row(os, {r.key, std::to_string(r.year), format_double(r.value),
                           r.unit, panel::provenance_to_string(r.provenance)});
    }
}

std::vector<panel::PanelRow> read_panel_csv(const std::string& path) {
    auto table = read_csv_file(path);
    std::vector<panel::PanelRow> out;
    try {
        const auto c_key = table.col("key");
        const auto c_year = table.col("year");
        const auto c_value = table.col("value");
        const auto c_unit = table.col("unit");
        const auto c_prov = table.col("provenance");
        for (const auto& row : table.rows) {
            panel::PanelRow r;
            r.key = row[c_key];
            r.year = parse_int(row[c_year]);
            r.value = parse_double(row[c_value]);
            r.unit = row[c_unit];
            r.provenance = panel::provenance_from_string(row[c_prov]);
            out.push_back(std::move(r));
        }
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
    return out;
}

std::map<std::string, TimeSeries> read_series_csv(const std::string& path) {
    auto table = read_csv_file(path);
    std::map<std::string, TimeSeries> out;
    try {
        std::size_t c_key = 0;
        bool have_key = false;
        for (const char* cand : {"key", "series", "series_id"}) {
            auto it = std::find(table.header.begin(), table.header.end(), cand);
            if (it != table.header.end()) {
                c_key = static_cast<std::size_t>(it - table.header.begin());
                have_key = true;
                break;
            }
        }
        if (!have_key) {
            throw IoError("no series-id column (key, series, or series_id)");
        }
        const auto c_year = table.col("year");
        const auto c_value = table.col("value");

        std::map<std::string, std::map<int, double>> grouped;
        for (const auto& row : table.rows) {
            const auto& key = row[c_key];
            const int year = parse_int(row[c_year]);
            auto [it, inserted] =
                grouped[key].emplace(year, parse_double(row[c_value]));
            if (!inserted) {
                throw IoError("duplicate year " + std::to_string(year) +
                              " for series '" + key + "'");
            }
        }
        for (auto& [key, cells] : grouped) {
            TimeSeries s;
            s.id = key;
            for (const auto& [year, value] : cells) {
                s.periods.push_back(year);
                s.values.push_back(value);
            }
            out.emplace(key, std::move(s));
        }
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
    return out;
}

} // namespace shipbreak
