#pragma once

#include "polylearn/point_matrix.hpp"

#include <filesystem>
#include <istream>
#include <string>

namespace polylearn::io {

/// Malformed input; carries the 1-based line and column of the offending token.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column), detail_(what) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// Text format: a header line "dims d n", then one line per column holding d
/// values printed with 17 significant digits.
std::string format_matrix(const PointMatrix& W);
PointMatrix parse_matrix(std::istream& in);

PointMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const PointMatrix& W);

/// Writes to a sibling temp file and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace polylearn::io
