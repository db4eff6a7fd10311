#include "ptfusion/frame.hpp"
#include "ptfusion/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace ptfusion {

Histogram histogram(const Frame& frame) {
    Histogram h;
    for (std::uint8_t v : frame.pixels)
        ++h.bins[v];
    h.total = frame.pixel_count();
    return h;
}

namespace {

// Token reader over the PGM header area. Netpbm comments run from '#' to
// end of line and may appear between tokens.
struct TokenReader {
    const std::vector<std::uint8_t>& data;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < data.size()) {
            std::uint8_t c = data[pos];
            if (c == '#') {
                while (pos < data.size() && data[pos] != '\n')
                    ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    // Nonnegative decimal integer; throws MalformedHeader on anything else.
    long next_int(const char* what) {
        skip_space_and_comments();
        if (pos >= data.size() || !std::isdigit(data[pos]))
            throw MalformedHeader(std::string("pgm: expected ") + what);
        long value = 0;
        while (pos < data.size() && std::isdigit(data[pos])) {
            value = value * 10 + (data[pos] - '0');
            if (value > 1'000'000'000)
                throw MalformedHeader(std::string("pgm: ") + what + " out of range");
            ++pos;
        }
        return value;
    }
};

} // namespace

Frame decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw MalformedHeader("pgm: bad magic (want P2 or P5)");
    const bool binary = bytes[1] == '5';

    TokenReader rd{bytes, 2};
    long width = rd.next_int("width");
    long height = rd.next_int("height");
    long maxval = rd.next_int("maxval");
    if (width < 1 || height < 1)
        throw MalformedHeader("pgm: nonpositive dimensions");
    if (maxval < 1)
        throw MalformedHeader("pgm: nonpositive maxval");
    if (maxval > 255)
        throw UnsupportedMaxval("pgm: maxval > 255 not supported");

    Frame frame(static_cast<int>(width), static_cast<int>(height));
    const std::size_t n = frame.pixel_count();

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        if (rd.pos >= bytes.size() || !std::isspace(bytes[rd.pos]))
            throw MalformedHeader("pgm: missing raster separator");
        ++rd.pos;
        if (bytes.size() - rd.pos < n)
            throw TruncatedPixelData("pgm: raster shorter than width*height");
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos), n, frame.pixels.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            rd.skip_space_and_comments();
            if (rd.pos >= bytes.size())
                throw TruncatedPixelData("pgm: ASCII raster ended early");
            long v = rd.next_int("pixel value");
            if (v > maxval)
                throw MalformedHeader("pgm: pixel value above maxval");
            frame.pixels[i] = static_cast<std::uint8_t>(v);
        }
    }
    return frame;
}

std::vector<std::uint8_t> encode_pgm(const Frame& frame) {
    std::string header = "P5\n" + std::to_string(frame.width) + " " +
                         std::to_string(frame.height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + frame.pixel_count());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), frame.pixels.begin(), frame.pixels.end());
    return out;
}

Frame read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
    auto bytes = encode_pgm(frame);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

namespace {

// Minimal glob: '*' any run, '?' any single char. Applied to basenames only.
bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, s = 0, star = std::string::npos, star_s = 0;
    while (s < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[s])) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_s = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++star_s;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*')
        ++p;
    return p == pattern.size();
}

} // namespace

std::vector<std::filesystem::path> list_frame_files(const std::string& pattern) {
    namespace fs = std::filesystem;
    fs::path as_path(pattern);

    fs::path dir;
    std::string glob;
    if (fs::is_directory(as_path)) {
        dir = as_path;
        glob = "*.pgm";
    } else {
        dir = as_path.parent_path();
        if (dir.empty())
            dir = ".";
        glob = as_path.filename().string();
    }

    std::vector<fs::path> files;
    if (!fs::is_directory(dir))
        return files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        if (glob_match(glob, entry.path().filename().string()))
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

} // namespace ptfusion
