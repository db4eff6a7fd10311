#ifndef PTFUSION_FRAME_HPP
#define PTFUSION_FRAME_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ptfusion {

// 8-bit grayscale frame, row-major, top-to-bottom. Immutable by convention
// once filled; `index` is the ordinal assigned by the sequence reader, not
// stored in files.
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;
    std::int64_t index = 0;

    Frame() = default;
    Frame(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int row, int col) const {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    std::uint8_t& at(int row, int col) {
        return pixels[static_cast<std::size_t>(row) * width + col];
    }
    std::size_t pixel_count() const { return pixels.size(); }

    bool same_shape(const Frame& other) const {
        return width == other.width && height == other.height;
    }
    bool operator==(const Frame& other) const {
        return width == other.width && height == other.height && pixels == other.pixels;
    }
};

// 256-bin gray-level histogram.
struct Histogram {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;
};

Histogram histogram(const Frame& frame);

// Netpbm grayscale codec. Reads binary P5 and ASCII P2 with maxval <= 255;
// writes P5 with maxval 255. decode(encode(f)) == f for every valid frame.
Frame decode_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_pgm(const Frame& frame);

Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

// Expands a directory or a glob pattern (*, ? in the basename) into a
// lexicographically sorted file list. A bare directory means "*.pgm" inside
// it. The sorted position becomes each frame's ordinal when read.
std::vector<std::filesystem::path> list_frame_files(const std::string& pattern);

} // namespace ptfusion

#endif
