#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace etlab::harness {

using json = nlohmann::json;

inline constexpr const char* tool_name = "etlab";
inline constexpr const char* tool_version = "0.1.0";

/// Plot-ready table; cells are numbers or text.
struct Table {
    using Cell = std::variant<double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    bool empty() const noexcept { return columns.empty(); }
};

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// RFC 4180: CRLF line ends, fields quoted when they contain a comma,
/// quote, CR or LF, embedded quotes doubled.
std::string csv_escape(const std::string& field);
void write_csv(std::ostream& os, const Table& table);

/// {"tool", "version", "config", "result"}.
/// streams: labels of the derived random streams the command drew from.
json make_report(const json& config, const json& result, const std::vector<std::string>& streams = {});

/// 64-bit FNV-1a of the canonical (sorted-key, compact) dump.
std::string config_hash(const json& config);

}  // namespace etlab::harness
