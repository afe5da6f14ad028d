#include "etlab_harness/sample_store.hpp"

#include <array>
#include <bit>
#include <fstream>

#include <etlab/error.hpp>

#include "etlab_harness/output.hpp"

namespace etlab::harness {

namespace fs = std::filesystem;

namespace {

fs::path manifest_path(const fs::path& base) {
    return base.extension() == ".json" ? base : fs::path(base.string() + ".json");
}

fs::path payload_path(const fs::path& manifest) {
    fs::path p = manifest;
    p.replace_extension(".f64");
    return p;
}

}  // namespace

fs::path write_sample_store(const fs::path& base, const SampleStore& store) {
    const fs::path manifest = manifest_path(base);
    const fs::path payload = payload_path(manifest);
    {
        std::ofstream out(payload, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorKind::io, "sample store: cannot write " + payload.string());
        for (double v : store.values) {
            const auto bits = std::bit_cast<std::uint64_t>(v);
            std::array<char, 8> bytes;
            for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
            out.write(bytes.data(), 8);
        }
        if (!out) raise(ErrorKind::io, "sample store: write failed for " + payload.string());
    }
    json m;
    m["format"] = "etlab-sample-store";
    m["format_version"] = sample_store_format_version;
    m["tool"] = tool_name;
    m["version"] = tool_version;
    m["config"] = store.config;
    m["config_hash"] = config_hash(store.config);
    m["count"] = store.values.size();
    m["seed"] = store.seed;
    m["streams"] = store.streams;
    m["payload"] = payload.filename().string();
    m["dtype"] = "float64-le";
    std::ofstream out(manifest, std::ios::trunc);
    if (!out) raise(ErrorKind::io, "sample store: cannot write " + manifest.string());
    out << m.dump(2) << '\n';
    if (!out) raise(ErrorKind::io, "sample store: write failed for " + manifest.string());
    return manifest;
}

SampleStore read_sample_store(const fs::path& manifest_or_base) {
    const fs::path manifest = manifest_path(manifest_or_base);
    std::ifstream in(manifest);
    if (!in) raise(ErrorKind::io, "sample store: cannot read " + manifest.string());
    json m;
    try {
        in >> m;
    } catch (const json::exception& e) {
        raise(ErrorKind::io, std::string("sample store: malformed manifest: ") + e.what());
    }
    if (m.value("format", "") != "etlab-sample-store")
        raise(ErrorKind::io, "sample store: " + manifest.string() + " is not a sample-store manifest");
    SampleStore s;
    s.config = m.at("config");
    if (config_hash(s.config) != m.at("config_hash").get<std::string>())
        raise(ErrorKind::io, "sample store: config hash mismatch in " + manifest.string());
    s.seed = m.at("seed").get<std::uint64_t>();
    s.streams = m.at("streams").get<std::vector<std::string>>();
    const auto count = m.at("count").get<std::uint64_t>();
    const fs::path payload = manifest.parent_path() / m.at("payload").get<std::string>();
    std::error_code ec;
    const auto size = fs::file_size(payload, ec);
    if (ec) raise(ErrorKind::io, "sample store: missing payload " + payload.string());
    if (size != count * 8)
        raise(ErrorKind::io, "sample store: payload holds " + std::to_string(size) + " bytes, manifest says " +
                                 std::to_string(count) + " values");
    std::ifstream p(payload, std::ios::binary);
    s.values.resize(count);
    std::array<unsigned char, 8> bytes;
    for (auto& v : s.values) {
        p.read(reinterpret_cast<char*>(bytes.data()), 8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes[i]} << (8 * i);
        v = std::bit_cast<double>(bits);
    }
    if (!p) raise(ErrorKind::io, "sample store: short read from " + payload.string());
    return s;
}

}  // namespace etlab::harness
