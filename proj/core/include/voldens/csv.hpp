#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace voldens::csv {

/// Shortest round-trip decimal form of v (std::to_chars). Locale independent,
/// so repeated runs produce byte-identical files.
std::string format(double v);

/// Minimal CSV writer: header row first, then numeric or text rows.
class Writer {
public:
    Writer(std::ostream& out, std::initializer_list<std::string_view> header);
    Writer(std::ostream& out, const std::vector<std::string>& header);

    void row(std::initializer_list<double> values);
    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    std::size_t columns_;
};

/// Parsed CSV: header plus rows of raw cells. Blank lines are skipped; a
/// trailing '\r' is stripped. Quoting is not supported.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;  ///< throws ParseError when absent
};

Table read(std::istream& in);

/// Strict double parse of a whole cell (std::from_chars); throws ParseError.
double parse_double(std::string_view cell);

}  // namespace voldens::csv
