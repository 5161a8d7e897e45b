#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "emsrag/common/config.hpp"
#include "emsrag/common/error.hpp"
#include "emsrag/common/hash.hpp"
#include "emsrag/common/jsonl.hpp"
#include "emsrag/common/rng.hpp"
#include "support/synthetic.hpp"

using namespace emsrag;
namespace fs = std::filesystem;

TEST_CASE("splitmix64 matches the reference stream") {
    // First three outputs of the published splitmix64 reference for seed 0.
    rng::SplitMix64 gen(0);
    CHECK(gen.next() == 0xe220a8397b1dcdafull);
    CHECK(gen.next() == 0x6e789e6aa1b965f4ull);
    CHECK(gen.next() == 0x06c45d188009454full);
}

TEST_CASE("splitmix64 is deterministic per seed and distinct across seeds") {
    rng::SplitMix64 a(1234), b(1234), c(1235);
    bool all_equal = true;
    bool any_diff_c = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next();
        all_equal = all_equal && x == b.next();
        any_diff_c = any_diff_c || x != c.next();
    }
    CHECK(all_equal);
    CHECK(any_diff_c);
}

TEST_CASE("uniform draws stay inside their interval") {
    rng::SplitMix64 gen(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = gen.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 10000; ++i) {
        const double u = gen.uniform(-2.5, 4.0);
        CHECK(u >= -2.5);
        CHECK(u < 4.0);
    }
}

TEST_CASE("index covers every residue of a small modulus") {
    rng::SplitMix64 gen(9);
    std::set<std::size_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t v = gen.index(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("gaussian draws have standard-normal moments") {
    rng::SplitMix64 gen(11);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = gen.gaussian();
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("shuffle permutes in place, deterministically per seed") {
    std::vector<int> items(100);
    for (int i = 0; i < 100; ++i) items[static_cast<std::size_t>(i)] = i;
    const std::vector<int> original = items;

    rng::SplitMix64 gen(42);
    rng::shuffle(items, gen);
    std::vector<int> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == original);
    CHECK(items != original);  // 100! leaves no realistic chance of identity

    std::vector<int> again = original;
    rng::SplitMix64 gen2(42);
    rng::shuffle(again, gen2);
    CHECK(again == items);

    std::vector<int> single{5};
    rng::SplitMix64 gen3(1);
    rng::shuffle(single, gen3);
    CHECK(single == std::vector<int>{5});
}

TEST_CASE("sample_without_replacement yields k distinct in-range indices") {
    rng::SplitMix64 gen(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + gen.index(40);
        const std::size_t k = 1 + gen.index(n);
        auto picked = rng::sample_without_replacement(n, k, gen);
        CHECK(picked.size() == k);
        std::set<std::size_t> distinct(picked.begin(), picked.end());
        CHECK(distinct.size() == k);
        for (const auto idx : picked) CHECK(idx < n);
    }

    // k == n is a full permutation.
    auto all = rng::sample_without_replacement(10, 10, gen);
    std::set<std::size_t> distinct(all.begin(), all.end());
    CHECK(distinct.size() == 10);

    CHECK_THROWS_AS(rng::sample_without_replacement(3, 4, gen), std::invalid_argument);
    CHECK(rng::sample_without_replacement(5, 0, gen).empty());
}

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("fnv1a64 seed chaining equals hashing the concatenation") {
    const std::string left = "hello, ";
    const std::string right = "world";
    CHECK(fnv1a64(right, fnv1a64(left)) == fnv1a64(left + right));
}

TEST_CASE("to_hex is fixed-width lowercase") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
    CHECK(to_hex(0xdeadbeefull) == "00000000deadbeef");
    CHECK(to_hex(0xffffffffffffffffull) == "ffffffffffffffff");
}

TEST_CASE("jsonl round-trips rows and skips blank lines") {
    testsupport::TempDir dir("jsonl");
    const fs::path path = dir / "rows.jsonl";

    std::vector<nlohmann::json> rows = {
        nlohmann::json{{"id", "a"}, {"n", 1}},
        nlohmann::json{{"id", "b"}, {"nested", {{"x", 2.5}}}},
        nlohmann::json{{"id", "c"}, {"list", {1, 2, 3}}},
    };
    jsonl::write_file(path, rows);
    CHECK(jsonl::read_file(path) == rows);

    // Hand-written file with interleaved blank lines parses to the same rows.
    std::ofstream out(path);
    out << rows[0].dump() << "\n\n" << rows[1].dump() << "\n   \n" << rows[2].dump() << "\n";
    out.close();
    CHECK(jsonl::read_file(path) == rows);
}

TEST_CASE("jsonl write is atomic and leaves no temporaries") {
    testsupport::TempDir dir("jsonl_atomic");
    const fs::path path = dir / "rows.jsonl";
    jsonl::write_file(path, {nlohmann::json{{"v", 1}}});
    jsonl::write_file(path, {nlohmann::json{{"v", 2}}});  // overwrite

    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(dir.path())) {
        ++entries;
        CHECK(e.path() == path);
    }
    CHECK(entries == 1);
    CHECK(jsonl::read_file(path).at(0).at("v") == 2);
}

TEST_CASE("jsonl read failures carry IoError") {
    testsupport::TempDir dir("jsonl_err");
    CHECK_THROWS_AS(jsonl::read_file(dir / "missing.jsonl"), IoError);

    const fs::path bad = dir / "bad.jsonl";
    std::ofstream(bad) << "{\"ok\": 1}\nnot json at all {{{\n";
    CHECK_THROWS_AS(jsonl::read_file(bad), IoError);
}

TEST_CASE("text writes are atomic and round-trip") {
    testsupport::TempDir dir("text");
    const fs::path path = dir / "note.txt";
    const std::string content = "line one\nline two\n";
    jsonl::write_text_atomic(path, content);
    CHECK(jsonl::read_text(path) == content);

    jsonl::write_text_atomic(path, "replaced");
    CHECK(jsonl::read_text(path) == "replaced");
    CHECK_THROWS_AS(jsonl::read_text(dir / "absent.txt"), IoError);
}

TEST_CASE("config parses keys, comments, and typed accessors") {
    const auto cfg = Config::from_string(
        "# leading comment\n"
        "backend.chat.mode = mock\n"
        "retrieval.m = 8   # trailing comment\n"
        "threshold = 0.25\n"
        "flag-a = yes\n"
        "flag-b = OFF\n"
        "\n"
        "   # indented comment\n"
        "name = spaced value here\n");
    CHECK(cfg.get("backend.chat.mode", "") == "mock");
    CHECK(cfg.get_int("retrieval.m", -1) == 8);
    CHECK(cfg.get_double("threshold", 0.0) == doctest::Approx(0.25));
    CHECK(cfg.get_bool("flag-a", false) == true);
    CHECK(cfg.get_bool("flag-b", true) == false);
    CHECK(cfg.get("name", "") == "spaced value here");
    CHECK(cfg.get("missing", "fallback") == "fallback");
    CHECK(cfg.get_int("missing", 77) == 77);
    CHECK(cfg.has("threshold"));
    CHECK_FALSE(cfg.has("missing"));
}

TEST_CASE("config rejects malformed input and bad types") {
    CHECK_THROWS_AS(Config::from_string("just a bare line\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("= value without key\n"), ConfigError);
    const auto cfg = Config::from_string("n = abc\nd = xyz\nb = maybe\n");
    CHECK_THROWS_AS(cfg.get_int("n", 0), ConfigError);
    CHECK_THROWS_AS(cfg.get_double("d", 0.0), ConfigError);
    CHECK_THROWS_AS(cfg.get_bool("b", false), ConfigError);
    CHECK_THROWS_AS(cfg.require("nope"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/emsrag.conf"), ConfigError);
}

TEST_CASE("config loads from disk identically to from_string") {
    testsupport::TempDir dir("config");
    const fs::path path = dir / "run.conf";
    const std::string text = "a.b = 1\nc-d = two\n";
    jsonl::write_text_atomic(path, text);
    const auto loaded = Config::load(path);
    const auto parsed = Config::from_string(text);
    CHECK(loaded.entries() == parsed.entries());
}

TEST_CASE("env names uppercase keys and normalize separators") {
    CHECK(Config::env_name("backend.chat.url") == "EMSRAG_BACKEND_CHAT_URL");
    CHECK(Config::env_name("flag-a") == "EMSRAG_FLAG_A");
    CHECK(Config::env_name("x", "PFX_") == "PFX_X");
}

TEST_CASE("environment overrides replace known keys only") {
    auto cfg = Config::from_string("env.test.alpha = original\nenv.test.beta = keep\n");
    ::setenv("EMSRAG_ENV_TEST_ALPHA", "overridden", 1);
    ::unsetenv("EMSRAG_ENV_TEST_BETA");
    ::setenv("EMSRAG_ENV_TEST_GAMMA", "stray", 1);
    cfg.apply_env_overrides();
    CHECK(cfg.get("env.test.alpha", "") == "overridden");
    CHECK(cfg.get("env.test.beta", "") == "keep");
    CHECK_FALSE(cfg.has("env.test.gamma"));
    ::unsetenv("EMSRAG_ENV_TEST_ALPHA");
    ::unsetenv("EMSRAG_ENV_TEST_GAMMA");
}

TEST_CASE("config fingerprint is stable and value-sensitive") {
    const auto a = Config::from_string("x = 1\ny = 2\n");
    const auto b = Config::from_string("y = 2\nx = 1\n");  // order-insensitive map
    const auto c = Config::from_string("x = 1\ny = 3\n");
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.fingerprint() == to_hex(fnv1a64(a.dump())));
    CHECK(a.fingerprint().size() == 16);
}
