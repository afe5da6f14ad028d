#include "etlab_harness/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace etlab::harness {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << csv_escape(table.columns[i]);
    os << "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const auto* d = std::get_if<double>(&row[i]))
                os << format_double(*d);
            else
                os << csv_escape(std::get<std::string>(row[i]));
        }
        os << "\r\n";
    }
}

json make_report(const json& config, const json& result, const std::vector<std::string>& streams) {
    json r{{"tool", tool_name}, {"version", tool_version}, {"config", config}, {"result", result}};
    if (!streams.empty()) r["streams"] = streams;
    return r;
}

std::string config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace etlab::harness
