#include "etlab/sieve_cache.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <system_error>

#include "etlab/error.hpp"

namespace etlab {

namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> magic = {'E', 'T', 'L', 'B'};

template <class T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes;
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) raise(ErrorKind::io, "sieve table: truncated header or payload");
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

const char* kind_name(TableKind kind) { return kind == TableKind::divisor ? "divisor" : "two-squares"; }

}  // namespace

void write_table(std::ostream& out, const TableFile& table) {
    if (table.values.size() != table.limit) raise(ErrorKind::invalid_argument, "sieve table: size/limit mismatch");
    out.write(magic.data(), magic.size());
    put_le<std::uint16_t>(out, TableFile::format_version);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(table.kind));
    put_le<std::uint64_t>(out, table.limit);
    for (std::uint32_t v : table.values) put_le<std::uint32_t>(out, v);
    if (!out) raise(ErrorKind::io, "sieve table: write failed");
}

TableFile read_table(std::istream& in) {
    std::array<char, 4> head{};
    in.read(head.data(), head.size());
    if (!in || head != magic) raise(ErrorKind::io, "sieve table: bad magic");
    const auto version = get_le<std::uint16_t>(in);
    if (version != TableFile::format_version)
        raise(ErrorKind::io, "sieve table: unsupported format version " + std::to_string(version));
    const auto kind = get_le<std::uint8_t>(in);
    if (kind > 1) raise(ErrorKind::io, "sieve table: unknown table kind " + std::to_string(kind));
    TableFile table;
    table.kind = static_cast<TableKind>(kind);
    table.limit = get_le<std::uint64_t>(in);
    table.values.resize(table.limit);
    for (auto& v : table.values) v = get_le<std::uint32_t>(in);
    return table;
}

TableFile to_table_file(const DivisorTable& table) {
    return {TableKind::divisor, table.limit, {table.values.begin() + 1, table.values.end()}};
}

TableFile to_table_file(const TwoSquaresTable& table) {
    return {TableKind::two_squares, table.limit, {table.values.begin() + 1, table.values.end()}};
}

SieveCache::SieveCache(fs::path root) : root_(std::move(root)) {}

fs::path SieveCache::default_root() {
    if (const char* env = std::getenv("ETLAB_CACHE_DIR"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg && *xdg) return fs::path(xdg) / "etlab" / "sieve-cache";
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".local" / "share" / "etlab" / "sieve-cache";
    return fs::temp_directory_path() / "etlab-sieve-cache";
}

fs::path SieveCache::path_for(TableKind kind, std::uint64_t limit) const {
    return root_ / (std::string(kind_name(kind)) + "-" + std::to_string(limit) + ".etlb");
}

bool SieveCache::load(TableKind kind, std::uint64_t limit, TableFile& out) const {
    std::ifstream in(path_for(kind, limit), std::ios::binary);
    if (!in) return false;
    try {
        out = read_table(in);
    } catch (const Error&) {
        return false;  // corrupt entries are rebuilt
    }
    return out.kind == kind && out.limit == limit;
}

void SieveCache::store(const TableFile& table) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) raise(ErrorKind::io, "sieve cache: cannot create " + root_.string() + ": " + ec.message());
    const fs::path final_path = path_for(table.kind, table.limit);
    const fs::path tmp = final_path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorKind::io, "sieve cache: cannot write " + tmp.string());
        write_table(out, table);
    }
    fs::rename(tmp, final_path, ec);
    if (ec) raise(ErrorKind::io, "sieve cache: cannot move table into place: " + ec.message());
}

DivisorTable SieveCache::divisor(std::uint64_t limit) {
    TableFile file;
    if (load(TableKind::divisor, limit, file)) {
        DivisorTable t;
        t.limit = limit;
        t.values.reserve(limit + 1);
        t.values.push_back(0);
        t.values.insert(t.values.end(), file.values.begin(), file.values.end());
        return t;
    }
    DivisorTable t = divisor_sieve(limit);
    store(to_table_file(t));
    return t;
}

TwoSquaresTable SieveCache::two_squares(std::uint64_t limit) {
    TableFile file;
    if (load(TableKind::two_squares, limit, file)) {
        TwoSquaresTable t;
        t.limit = limit;
        t.values.reserve(limit + 1);
        t.values.push_back(0);
        t.values.insert(t.values.end(), file.values.begin(), file.values.end());
        return t;
    }
    TwoSquaresTable t = two_squares_sieve(limit);
    store(to_table_file(t));
    return t;
}

void SieveCache::build(std::uint64_t limit) {
    store(to_table_file(divisor_sieve(limit)));
    store(to_table_file(two_squares_sieve(limit)));
}

std::vector<SieveCache::Entry> SieveCache::status() const {
    std::vector<Entry> out;
    std::error_code ec;
    if (!fs::is_directory(root_, ec)) return out;
    for (const auto& item : fs::directory_iterator(root_, ec)) {
        if (!item.is_regular_file() || item.path().extension() != ".etlb") continue;
        std::ifstream in(item.path(), std::ios::binary);
        std::array<char, 4> head{};
        in.read(head.data(), head.size());
        if (!in || head != magic) continue;
        try {
            get_le<std::uint16_t>(in);
            const auto kind = static_cast<TableKind>(get_le<std::uint8_t>(in));
            const auto limit = get_le<std::uint64_t>(in);
            out.push_back({kind, limit, item.path(), item.file_size()});
        } catch (const Error&) {
        }
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
        return std::pair(a.kind, a.limit) < std::pair(b.kind, b.limit);
    });
    return out;
}

std::size_t SieveCache::clear() {
    std::size_t removed = 0;
    for (const auto& e : status()) {
        std::error_code ec;
        if (fs::remove(e.path, ec)) ++removed;
    }
    return removed;
}

}  // namespace etlab
