#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "etlab/arith.hpp"

namespace etlab {

enum class TableKind : std::uint8_t { divisor = 0, two_squares = 1 };

/// On-disk sieve table, little-endian:
///   "ETLB" | u16 format version | u8 kind | u64 limit | limit x u32 values (n = 1..limit)
struct TableFile {
    static constexpr std::uint16_t format_version = 1;

    TableKind kind = TableKind::divisor;
    std::uint64_t limit = 0;
    std::vector<std::uint32_t> values;  // values[n - 1] holds the entry for n
};

void write_table(std::ostream& out, const TableFile& table);
TableFile read_table(std::istream& in);

TableFile to_table_file(const DivisorTable& table);
TableFile to_table_file(const TwoSquaresTable& table);

/// Persistent cache of sieve tables keyed by (kind, limit). Root directory
/// comes from ETLAB_CACHE_DIR, else $XDG_DATA_HOME/etlab/sieve-cache, else
/// ~/.local/share/etlab/sieve-cache.
class SieveCache {
  public:
    struct Entry {
        TableKind kind;
        std::uint64_t limit;
        std::filesystem::path path;
        std::uintmax_t bytes;
    };

    explicit SieveCache(std::filesystem::path root);

    static std::filesystem::path default_root();

    const std::filesystem::path& root() const noexcept { return root_; }

    // Load from disk, or build and persist on a miss.
    DivisorTable divisor(std::uint64_t limit);
    TwoSquaresTable two_squares(std::uint64_t limit);

    void build(std::uint64_t limit);
    std::vector<Entry> status() const;
    std::size_t clear();

    std::filesystem::path path_for(TableKind kind, std::uint64_t limit) const;

  private:
    void store(const TableFile& table);
    bool load(TableKind kind, std::uint64_t limit, TableFile& out) const;

    std::filesystem::path root_;
};

}  // namespace etlab
