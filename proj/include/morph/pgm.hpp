#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace morph {

// 8-bit grayscale image, row-major, origin top-left.
struct Image8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Image8() = default;
    Image8(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Binary PGM (P5), maxval 255. Throws std::runtime_error on malformed input.
Image8 read_pgm(const std::string& path);
void write_pgm(const Image8& img, const std::string& path);

// In-memory variants, used by the loaders and their tests.
Image8 decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& origin);
std::vector<std::uint8_t> encode_pgm(const Image8& img);

}  // namespace morph
