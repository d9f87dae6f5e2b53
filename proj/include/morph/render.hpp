#pragma once

#include <string>

#include "morph/arena.hpp"
#include "morph/lattice.hpp"
#include "morph/pgm.hpp"

namespace morph {

enum class RenderMode { Occupancy, Field, Composite };

struct RenderParams {
    double gamma = 0.6;  // > 0
    RenderMode mode = RenderMode::Composite;
};

// Pure snapshot rendering. Occupancy mode paints occupied cells white over
// the arena codes (wall 128, obstacle 64, habitable 0). Field mode maps the
// signed field linearly with zero at 128, scaled by the frame's max |value|,
// then applies per-pixel gamma out = 255 * (in/255)^gamma. Composite draws
// occupied cells at full white on top of the field rendering.
Image8 render_frame(const ChemoLattice& lattice, const OccupancyGrid& occ, const Arena& arena,
                    const RenderParams& params);

std::string frame_filename(std::int64_t step);

}  // namespace morph
