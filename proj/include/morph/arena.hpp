#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morph/lattice.hpp"
#include "morph/pgm.hpp"

namespace morph {

enum class CellClass : std::uint8_t { Habitable = 0, Wall = 1, Obstacle = 2, Source = 3 };

enum class ObstacleMode { Impassable, Exposure };

// Pixel codes of the arena file format.
inline constexpr std::uint8_t kCodeHabitable = 0;
inline constexpr std::uint8_t kCodeObstacle = 64;
inline constexpr std::uint8_t kCodeWall = 128;
inline constexpr std::uint8_t kCodeSource = 255;

struct Source {
    int id = 0;  // 1-based, row-major discovery order
    std::vector<Cell> cells;
    double strength = 6.375;  // concentration added per scheduler step
    bool active = true;

    // Mean cell position; used to pick path endpoints.
    double centroid_x() const;
    double centroid_y() const;
};

// Cell-classified map plus the per-step stimulus configuration. Call
// finalize() after changing obstacle_mode or strengths; it rebuilds the
// derived masks the scheduler and loaders depend on.
class Arena {
public:
    Arena() = default;
    Arena(int width, int height, std::vector<CellClass> classes);

    static Arena from_image(const Image8& img, const std::string& origin);
    static Arena load(const std::string& path);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    CellClass cell_class(int x, int y) const { return classes_[index(x, y)]; }
    const std::vector<CellClass>& classes() const { return classes_; }

    std::vector<Source>& sources() { return sources_; }
    const std::vector<Source>& sources() const { return sources_; }
    const Source* find_source(int id) const;
    int active_source_count() const;

    // Marks the source inactive; its cells stop projecting permanently.
    // Throws std::runtime_error for unknown or already-removed ids.
    void remove_source(int id);

    // Stimulus configuration.
    double wall_repellent_strength = 0.0;  // <= 0; 0 disables
    ObstacleMode obstacle_mode = ObstacleMode::Impassable;
    int exposure_window = 11;            // odd
    double exposed_strength = -6.375;    // per step at exposed obstacle cells
    double covered_strength = -0.006375; // per step at covered obstacle cells

    void finalize();

    // Derived masks, valid after finalize().
    bool enterable(int x, int y) const { return enterable_[index(x, y)] != 0; }
    const std::vector<std::uint8_t>& enterable_mask() const { return enterable_; }
    // Walls plus obstacles in impassable mode: diffusion sinks and clearance
    // targets.
    bool wall_like(int x, int y) const { return wall_like_[index(x, y)] != 0; }
    const std::vector<std::uint8_t>& wall_like_mask() const { return wall_like_; }
    const std::vector<Cell>& wall_adjacent_cells() const { return wall_adjacent_; }
    const std::vector<Cell>& obstacle_cells() const { return obstacle_cells_; }

    // Applies the sink mask onto a matching lattice.
    void apply_sinks(ChemoLattice& lattice) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<CellClass> classes_;
    std::vector<Source> sources_;

    std::vector<std::uint8_t> enterable_;
    std::vector<std::uint8_t> wall_like_;
    std::vector<Cell> wall_adjacent_;
    std::vector<Cell> obstacle_cells_;
};

// Exposure flags parallel to arena.obstacle_cells().
struct ExposureState {
    std::vector<std::uint8_t> exposed;
};

// An obstacle cell is exposed when no particle sits inside the
// exposure_window x exposure_window box around it, covered otherwise.
ExposureState update_exposure(const Arena& arena, const OccupancyGrid& occ);
ExposureState update_exposure(const Arena& arena, const CountIntegral& counts);

// Adds this step's stimuli: source strength at active source cells, the wall
// repellent at wall-adjacent habitable cells, and in exposure mode the
// exposed/covered strengths at obstacle cells.
void project_stimuli(const Arena& arena, const ExposureState& exposure, ChemoLattice& lattice);

}  // namespace morph
