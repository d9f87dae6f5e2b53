#include "morph/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace morph {

namespace {

void paint_field(const ChemoLattice& lattice, double gamma, Image8& img) {
    double max_abs = 0.0;
    for (double v : lattice.values()) max_abs = std::max(max_abs, std::fabs(v));

    const std::size_t n = lattice.values().size();
    for (std::size_t i = 0; i < n; ++i) {
        double lin = 128.0;
        if (max_abs > 0.0)
            lin = 128.0 + 127.0 * (lattice.values()[i] / max_abs);
        lin = std::clamp(std::floor(lin + 0.5), 0.0, 255.0);
        const double out = 255.0 * std::pow(lin / 255.0, gamma);
        img.pixels[i] = static_cast<std::uint8_t>(std::clamp(out, 0.0, 255.0));
    }
}

}  // namespace

Image8 render_frame(const ChemoLattice& lattice, const OccupancyGrid& occ, const Arena& arena,
                    const RenderParams& params) {
    if (lattice.width() != arena.width() || lattice.height() != arena.height() ||
        occ.width() != arena.width() || occ.height() != arena.height())
        throw std::invalid_argument("render_frame: dimension mismatch");
    if (!(params.gamma > 0.0)) throw std::invalid_argument("render_frame: gamma must be > 0");

    Image8 img(arena.width(), arena.height());
    switch (params.mode) {
        case RenderMode::Occupancy:
            for (int y = 0; y < arena.height(); ++y) {
                for (int x = 0; x < arena.width(); ++x) {
                    std::uint8_t px = 0;
                    switch (arena.cell_class(x, y)) {
                        case CellClass::Wall: px = kCodeWall; break;
                        case CellClass::Obstacle: px = kCodeObstacle; break;
                        default: px = 0; break;
                    }
                    if (occ.occupied(x, y)) px = 255;
                    img.at(x, y) = px;
                }
            }
            break;
        case RenderMode::Field:
            paint_field(lattice, params.gamma, img);
            break;
        case RenderMode::Composite:
            paint_field(lattice, params.gamma, img);
            for (std::size_t i = 0; i < img.pixels.size(); ++i)
                if (occ.cells()[i] != OccupancyGrid::kEmpty) img.pixels[i] = 255;
            break;
    }
    return img;
}

std::string frame_filename(std::int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%08lld.pgm", static_cast<long long>(step));
    return buf;
}

}  // namespace morph
