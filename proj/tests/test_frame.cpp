#include "doctest.h"

#include "ptfusion/errors.hpp"
#include "ptfusion/frame.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using namespace ptfusion;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
    fs::path dir = fs::temp_directory_path() / (std::string("ptfusion_frame_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("pgm round-trips arbitrary pixel data") {
    Frame frame(37, 21);
    std::mt19937 rng(7);
    for (auto& px : frame.pixels) px = static_cast<std::uint8_t>(rng() & 0xff);
    frame.index = 12;

    fs::path dir = temp_dir("roundtrip");
    write_pgm(dir / "f.pgm", frame);
    Frame back = read_pgm(dir / "f.pgm");

    CHECK(back.width == frame.width);
    CHECK(back.height == frame.height);
    CHECK(back.pixels == frame.pixels);
    fs::remove_all(dir);
}

TEST_CASE("pgm header variants and failures") {
    fs::path dir = temp_dir("headers");

    SUBCASE("comments and flexible whitespace are accepted") {
        write_bytes(dir / "ok.pgm", "P5 # raw\n# a comment line\n 2\t3 \n255\nABCDEF");
        Frame f = read_pgm(dir / "ok.pgm");
        CHECK(f.width == 2);
        CHECK(f.height == 3);
        CHECK(f.at(0, 0) == 'A');
        CHECK(f.at(2, 1) == 'F');
    }
    SUBCASE("ascii and binary encodings agree") {
        write_bytes(dir / "ascii.pgm", "P2\n2 2\n255\n0 255 128 7\n");
        write_bytes(dir / "raw.pgm", std::string("P5\n2 2\n255\n") + '\0' + '\xff' + '\x80' +
                                         '\x07');
        CHECK(read_pgm(dir / "ascii.pgm").pixels == read_pgm(dir / "raw.pgm").pixels);
    }
    SUBCASE("wrong magic") {
        write_bytes(dir / "p6.pgm", "P6\n2 2\n255\nxxxxxxxxxxxx");
        CHECK_THROWS_AS(read_pgm(dir / "p6.pgm"), MalformedHeader);
    }
    SUBCASE("maxval other than 255") {
        write_bytes(dir / "deep.pgm", "P5\n2 2\n65535\nAAAAAAAA");
        CHECK_THROWS_AS(read_pgm(dir / "deep.pgm"), UnsupportedMaxval);
    }
    SUBCASE("pixel data cut short") {
        write_bytes(dir / "short.pgm", "P5\n4 4\n255\nonlyten...");
        CHECK_THROWS_AS(read_pgm(dir / "short.pgm"), TruncatedPixelData);
    }
    SUBCASE("nonsense dimensions") {
        write_bytes(dir / "neg.pgm", "P5\n-3 4\n255\n");
        CHECK_THROWS_AS(read_pgm(dir / "neg.pgm"), MalformedHeader);
    }
    fs::remove_all(dir);
}

TEST_CASE("histogram counts every pixel once") {
    Frame frame(16, 4);
    for (std::size_t i = 0; i < frame.pixel_count(); ++i)
        frame.pixels[i] = static_cast<std::uint8_t>(i % 3 == 0 ? 10 : 200);

    Histogram h = histogram(frame);
    CHECK(h.total == 64);
    CHECK(h.bins[10] == 22);  // indices 0,3,...,63
    CHECK(h.bins[200] == 42);
    CHECK(h.bins[128] == 0);
}

TEST_CASE("frame listing sorts and filters") {
    fs::path dir = temp_dir("listing");
    for (const char* name : {"b_0002.pgm", "b_0000.pgm", "b_0001.pgm", "other.txt"})
        write_bytes(dir / name, "P5\n1 1\n255\nx");

    SUBCASE("a directory lists its pgm files in lexicographic order") {
        auto files = list_frame_files(dir.string());
        REQUIRE(files.size() == 3);
        CHECK(files[0].filename() == "b_0000.pgm");
        CHECK(files[2].filename() == "b_0002.pgm");
    }
    SUBCASE("a glob narrows the match") {
        auto files = list_frame_files((dir / "b_000?.pgm").string());
        CHECK(files.size() == 3);
        auto none = list_frame_files((dir / "c_*.pgm").string());
        CHECK(none.empty());
    }
    fs::remove_all(dir);
}
