#pragma once

// Column-named record sets written as CSV or as a JSON array of objects.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cayleyfib {

enum class Format { csv, json };

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width does not match the header");
        rows.push_back(std::move(row));
    }
};

inline std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        if (*d == 0.0) return "0";  // no "-0"
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", *d);
        return buf;
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

inline nlohmann::json json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

inline std::string render(const Table& t, Format f) {
    if (f == Format::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : t.rows) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
            arr.push_back(std::move(obj));
        }
        return arr.dump(2) + "\n";
    }
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += "\n";
    }
    return out;
}

inline std::string extension(Format f) { return f == Format::json ? ".json" : ".csv"; }

// Throws std::runtime_error when the file cannot be written.
inline std::filesystem::path write_table(const Table& t, const std::filesystem::path& dir, const std::string& stem,
                                         Format f) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / (stem + extension(f));
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << render(t, f);
    if (!os) throw std::runtime_error("write failed for " + path.string());
    return path;
}

}  // namespace cayleyfib
