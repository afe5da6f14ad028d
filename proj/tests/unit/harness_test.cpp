#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <etlab/error.hpp>

#include "etlab_harness/commands.hpp"
#include "etlab_harness/output.hpp"
#include "etlab_harness/sample_store.hpp"

namespace {

using namespace etlab::harness;
namespace fs = std::filesystem;

TEST(Csv, Escaping) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, TableLayout) {
    Table t;
    t.columns = {"x", "label"};
    t.rows = {{1.5, std::string("a,b")}, {-0.0, std::string("c")}};
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "x,label\r\n1.5,\"a,b\"\r\n-0,c\r\n");
}

TEST(Numbers, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3, 2.429835772028886, 1e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Report, HashIsStableAndSensitive) {
    const json a = {{"command", "scan"}, {"X", 10.0}};
    const json b = {{"X", 10.0}, {"command", "scan"}};
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(json{{"command", "scan"}, {"X", 11.0}}));
    const auto r = make_report(a, json{{"v", 1}});
    EXPECT_EQ(r["tool"], "etlab");
    EXPECT_EQ(r["config"], a);
}

TEST(SampleStoreFiles, RoundTrip) {
    const fs::path base = fs::temp_directory_path() / "etlab-unit-store";
    SampleStore s;
    s.config = {{"command", "model sample"}, {"seed", 5}};
    s.seed = 5;
    s.streams = {"model_phase"};
    s.values = {1.0, -2.5, 1e-310, 3.141592653589793};
    const auto manifest = write_sample_store(base, s);
    EXPECT_EQ(fs::file_size(fs::path(base.string() + ".f64")), 32u);
    const auto back = read_sample_store(manifest);
    EXPECT_EQ(back.values, s.values);
    EXPECT_EQ(back.seed, 5u);
    EXPECT_EQ(back.streams, s.streams);

    // Little-endian payload: first value 1.0 = 0x3FF0000000000000.
    std::ifstream raw(base.string() + ".f64", std::ios::binary);
    unsigned char bytes[8];
    raw.read(reinterpret_cast<char*>(bytes), 8);
    EXPECT_EQ(bytes[7], 0x3F);
    EXPECT_EQ(bytes[6], 0xF0);
    EXPECT_EQ(bytes[0], 0x00);
}

TEST(SampleStoreFiles, DetectsTampering) {
    const fs::path base = fs::temp_directory_path() / "etlab-unit-store-bad";
    SampleStore s;
    s.config = {{"command", "model sample"}};
    s.values = {1.0, 2.0};
    const auto manifest = write_sample_store(base, s);
    json m;
    std::ifstream(manifest) >> m;
    m["config"]["seed"] = 77;
    std::ofstream(manifest) << m.dump();
    EXPECT_THROW(read_sample_store(manifest), etlab::Error);

    write_sample_store(base, s);
    std::ofstream(base.string() + ".f64", std::ios::binary | std::ios::app) << "x";
    EXPECT_THROW(read_sample_store(base), etlab::Error);
}

TEST(Commands, ErrorTermAndUnknown) {
    const auto r = run_command({{"command", "error-term"}, {"family", "divisor"}, {"x", 10.0}}, {});
    EXPECT_EQ(r.result["exact_sum"], "27");
    EXPECT_NEAR(r.result["remainder"].get<double>(), 2.4298357720288859, 1e-13);
    EXPECT_THROW(run_command({{"command", "nope"}}, {}), etlab::Error);
    EXPECT_THROW(run_command({{"command", "error-term"}, {"family", "divisor"}}, {}), etlab::Error);
}

TEST(Commands, SameConfigSamePayload) {
    const json cfg = {{"command", "model sample"}, {"family", "circle"}, {"N", 20}, {"L", 5}, {"count", 300}, {"seed", 9}};
    EXPECT_EQ(run_command(cfg, {1}).samples, run_command(cfg, {3}).samples);
}

TEST(Commands, AllNamesRegistered) {
    const auto names = command_names();
    for (const char* n : {"error-term", "series", "model sample", "model moment", "model transform", "experiment moments",
                          "experiment cdf", "experiment laplace", "experiment tails", "independence verify",
                          "independence search", "scan", "cache status", "cache clear", "cache build"})
        EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}

}  // namespace
