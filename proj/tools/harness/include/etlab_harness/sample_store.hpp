#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace etlab::harness {

/// <base>.json manifest plus <base>.f64 payload of little-endian IEEE-754
/// doubles.
struct SampleStore {
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<std::string> streams;
    std::vector<double> values;
};

inline constexpr int sample_store_format_version = 1;

/// Writes both files; returns the manifest path.
std::filesystem::path write_sample_store(const std::filesystem::path& base, const SampleStore& store);

/// Reads the manifest (path to <base>.json or <base>), checks the payload
/// length and the config hash.
SampleStore read_sample_store(const std::filesystem::path& manifest_or_base);

}  // namespace etlab::harness
