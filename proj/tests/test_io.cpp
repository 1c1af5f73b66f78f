#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "spikerate/errors.hpp"
#include "spikerate/io.hpp"
#include "spikerate/rng.hpp"
#include "spikerate/spike_train.hpp"

using namespace spikerate;
namespace fs = std::filesystem;

namespace {

const fs::path& tmp_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "spikerate_io_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string tmp_file(const std::string& name, const std::string& content) {
    const auto path = (tmp_dir() / name).string();
    io::write_text(path, content);
    return path;
}

} // namespace

TEST_CASE("format_double emits shortest round-trip decimals") {
    CHECK(io::format_double(2.5) == "2.5");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.0) == "0");

    auto g = rng::derive_stream(321, 1);
    for (int i = 0; i < 200; ++i) {
        const double x = (g.uniform_open01() - 0.5) * std::pow(10.0, i % 61 - 30);
        const std::string s = io::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("read_spike_times parses newline-delimited epochs") {
    const auto path = tmp_file("basic.spiketimes", "1.0\n2.5\n3.0\n");
    const auto train = io::read_spike_times(path);
    CHECK(train.epochs() == std::vector<double>{1.0, 2.5, 3.0});
    CHECK(train.horizon() == 3.0);
}

TEST_CASE("read_spike_times tolerates blank lines and extra whitespace") {
    const auto path = tmp_file("spaced.spiketimes", "  1.0\t\n\n2.5 3.0\r\n\n");
    const auto train = io::read_spike_times(path);
    CHECK(train.epochs() == std::vector<double>{1.0, 2.5, 3.0});
}

TEST_CASE("read_spike_times reports the offending line") {
    SUBCASE("non-numeric token") {
        const auto path = tmp_file("bad_token.spiketimes", "1.0\nabc\n3.0\n");
        try {
            (void)io::read_spike_times(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("(line 2)") != std::string::npos);
        }
    }
    SUBCASE("non-monotone epochs") {
        const auto path = tmp_file("decreasing.spiketimes", "2.0\n1.0\n");
        try {
            (void)io::read_spike_times(path);
            FAIL("expected RejectedInput");
        } catch (const RejectedInput& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("non-positive and non-finite epochs") {
        CHECK_THROWS_AS((void)io::read_spike_times(
                            tmp_file("negative.spiketimes", "-1.0\n2.0\n")),
                        RejectedInput);
        CHECK_THROWS_AS(
            (void)io::read_spike_times(tmp_file("inf.spiketimes", "1.0\ninf\n")),
            RejectedInput);
    }
    SUBCASE("empty and missing files") {
        CHECK_THROWS_AS((void)io::read_spike_times(tmp_file("empty.spiketimes", "\n\n")),
                        InsufficientData);
        CHECK_THROWS_AS((void)io::read_spike_times((tmp_dir() / "missing.txt").string()),
                        RejectedInput);
    }
}

TEST_CASE("read_isis_csv accepts both layouts") {
    SUBCASE("index,isi with header") {
        const auto path = tmp_file("indexed.csv", "index,isi\n1,0.5\n2,0.7\n");
        CHECK(io::read_isis_csv(path) == std::vector<double>{0.5, 0.7});
    }
    SUBCASE("bare column without header") {
        const auto path = tmp_file("bare.csv", "0.5\n0.7\n");
        CHECK(io::read_isis_csv(path) == std::vector<double>{0.5, 0.7});
    }
    SUBCASE("non-numeric field past the header") {
        const auto path = tmp_file("bad.csv", "index,isi\n1,0.5\n2,oops\n");
        try {
            (void)io::read_isis_csv(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }
    SUBCASE("rejects non-positive ISIs") {
        CHECK_THROWS_AS((void)io::read_isis_csv(tmp_file("neg.csv", "1,-0.5\n")),
                        RejectedInput);
    }
    SUBCASE("empty file") {
        CHECK_THROWS_AS((void)io::read_isis_csv(tmp_file("empty.csv", "")),
                        InsufficientData);
    }
}

TEST_CASE("write_csv round-trips doubles at full precision") {
    auto g = rng::derive_stream(322, 1);
    std::vector<double> values(100);
    for (auto& v : values) v = g.exponential(3.0) + 1e-7;
    const auto path = (tmp_dir() / "roundtrip.csv").string();
    const io::Column cols[] = {{"isi", values}};
    io::write_csv(path, cols);
    CHECK(io::read_isis_csv(path) == values);

    const std::string text = io::read_text(path);
    CHECK(text.substr(0, 4) == "isi\n");
}

TEST_CASE("write_csv validates its columns") {
    const std::vector<double> a = {1.0, 2.0};
    const std::vector<double> b = {1.0};
    const io::Column mismatched[] = {{"a", a}, {"b", b}};
    CHECK_THROWS_AS(io::write_csv((tmp_dir() / "x.csv").string(), mismatched),
                    RejectedInput);
    CHECK_THROWS_AS(io::write_csv((tmp_dir() / "x.csv").string(),
                                  std::span<const io::Column>{}),
                    RejectedInput);
}

TEST_CASE("text IO round-trips bytes and paths compose") {
    const auto path = (tmp_dir() / "note.txt").string();
    const std::string content = "line1\nline2\n";
    io::write_text(path, content);
    CHECK(io::read_text(path) == content);
    CHECK(io::metadata_path("out.csv") == "out.csv.meta.json");
    CHECK_THROWS_AS((void)io::read_text((tmp_dir() / "nope.txt").string()),
                    RejectedInput);
}
