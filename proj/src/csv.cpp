#include "tchm/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tchm {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("row width " + std::to_string(row.size()) +
                                    " != header width " + std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_cell(const Cell& c) {
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
    return buf;
}

std::string to_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_cell(row[i]);
        out << "\n";
    }
    return out.str();
}

std::string to_json_records(const Table& t) {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << "  {";
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? ", " : "") << "\"" << t.columns[i] << "\": ";
            const Cell& c = t.rows[r][i];
            if (std::holds_alternative<std::string>(c))
                out << "\"" << std::get<std::string>(c) << "\"";
            else
                out << format_cell(c);
        }
        out << "}" << (r + 1 < t.rows.size() ? "," : "") << "\n";
    }
    out << "]\n";
    return out.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());

    std::random_device rd;
    const fs::path tmp =
        target.parent_path() /
        (target.filename().string() + ".tmp." + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

}  // namespace tchm
