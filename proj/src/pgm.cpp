#include "morph/pgm.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace morph {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw std::runtime_error(origin + ": " + what);
}

// Skips whitespace and '#' comments between header tokens.
bool next_header_token(const std::vector<std::uint8_t>& b, std::size_t& pos, std::string& tok) {
    while (pos < b.size()) {
        const char c = static_cast<char>(b[pos]);
        if (c == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    tok.clear();
    while (pos < b.size()) {
        const char c = static_cast<char>(b[pos]);
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') break;
        tok.push_back(c);
        ++pos;
    }
    return !tok.empty();
}

int parse_dim(const std::string& tok, const std::string& origin, const char* name) {
    int value = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') fail(origin, std::string("non-numeric ") + name + " '" + tok + "'");
        value = value * 10 + (c - '0');
        if (value > 1 << 20) fail(origin, std::string(name) + " out of range");
    }
    return value;
}

}  // namespace

Image8 decode_pgm(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    std::size_t pos = 0;
    std::string tok;
    if (!next_header_token(bytes, pos, tok) || tok != "P5")
        fail(origin, "not a binary PGM (expected magic P5)");
    if (!next_header_token(bytes, pos, tok)) fail(origin, "missing width");
    const int w = parse_dim(tok, origin, "width");
    if (!next_header_token(bytes, pos, tok)) fail(origin, "missing height");
    const int h = parse_dim(tok, origin, "height");
    if (!next_header_token(bytes, pos, tok)) fail(origin, "missing maxval");
    const int maxval = parse_dim(tok, origin, "maxval");
    if (maxval != 255) fail(origin, "maxval must be 255, got " + std::to_string(maxval));
    if (w <= 0 || h <= 0) fail(origin, "degenerate dimensions");
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size()) fail(origin, "truncated header");
    ++pos;
    const std::size_t need = static_cast<std::size_t>(w) * h;
    if (bytes.size() - pos < need) fail(origin, "truncated pixel data");

    Image8 img(w, h);
    std::copy(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
              bytes.begin() + static_cast<std::ptrdiff_t>(pos + need), img.pixels.begin());
    return img;
}

std::vector<std::uint8_t> encode_pgm(const Image8& img) {
    char header[64];
    const int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

Image8 read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_pgm(bytes, path);
}

void write_pgm(const Image8& img, const std::string& path) {
    const auto bytes = encode_pgm(img);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace morph
