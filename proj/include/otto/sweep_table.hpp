// sweep_table.hpp
// Row-oriented experiment results and their CSV serialization.

#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "otto/error.hpp"

namespace otto {

using Cell = std::variant<double, std::string>;

/// 17 significant digits, '.' decimal point, "inf"/"-inf"/"nan" for
/// non-finite values. Independent of the global locale.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    for (char& c : s) {
        if (c == ',') c = '.';
    }
    return s;
}

class SweepTable {
public:
    SweepTable() = default;
    explicit SweepTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) {
            fail(ErrorKind::InvalidArgument, "row has " + std::to_string(row.size()) + " cells, table has " +
                                                 std::to_string(columns_.size()) + " columns");
        }
        rows_.push_back(std::move(row));
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t k = 0; k < columns_.size(); ++k) {
            if (columns_[k] == name) return k;
        }
        fail(ErrorKind::InvalidArgument, "no column named '" + name + "'");
    }

    /// Numeric value at (row, column); text cells are an error.
    double number(std::size_t row, const std::string& name) const {
        const Cell& c = rows_.at(row).at(column_index(name));
        if (const double* d = std::get_if<double>(&c)) return *d;
        fail(ErrorKind::InvalidArgument, "cell in column '" + name + "' is not numeric");
    }

    /// All numeric values of a column, skipping text cells (e.g. a totals label row).
    std::vector<double> column(const std::string& name) const {
        const std::size_t k = column_index(name);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& row : rows_) {
            if (const double* d = std::get_if<double>(&row[k])) out.push_back(*d);
        }
        return out;
    }

    /// Free-form `key=value` lines emitted in the comment header.
    std::vector<std::pair<std::string, std::string>>& metadata() { return metadata_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

    void write_csv(std::ostream& os) const {
        for (const auto& [key, value] : metadata_) os << "# " << key << '=' << value << '\n';
        for (std::size_t k = 0; k < columns_.size(); ++k) os << (k ? "," : "") << columns_[k];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (k) os << ',';
                if (const double* d = std::get_if<double>(&row[k])) {
                    os << format_number(*d);
                } else {
                    os << std::get<std::string>(row[k]);
                }
            }
            os << '\n';
        }
    }

    std::string to_csv() const {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> metadata_;
};

}  // namespace otto
