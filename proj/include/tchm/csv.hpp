#ifndef TCHM_CSV_HPP
#define TCHM_CSV_HPP

#include <string>
#include <variant>
#include <vector>

namespace tchm {

// Row cell: numbers are emitted with 17 significant digits so that files
// survive a bit-exact read-back.
using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

std::string format_cell(const Cell& c);
std::string to_csv(const Table& t);
std::string to_json_records(const Table& t);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a half-written file. Creates parent directories.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace tchm

#endif
