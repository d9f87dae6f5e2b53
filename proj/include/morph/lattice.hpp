#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace morph {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

// Branchless floor-to-int; std::floor may lower to a libm call on baseline
// x86-64.
inline int floor_to_int(double v) {
    const int i = static_cast<int>(v);
    return i - (v < i);
}

struct DiffusionParams {
    int kernel_size = 3;   // odd, >= 3
    double damping = 0.9;  // (0, 1]

    bool valid() const {
        return kernel_size >= 3 && (kernel_size & 1) == 1 && damping > 0.0 && damping <= 1.0;
    }
};

// Signed chemoattractant concentration field plus a sink mask. Sink cells
// (walls) are clamped to zero after every mutation pass; samples beyond the
// lattice read as zero.
class ChemoLattice {
public:
    ChemoLattice() = default;
    ChemoLattice(int width, int height)
        : width_(width),
          height_(height),
          value_(static_cast<std::size_t>(width) * height, 0.0),
          sink_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    double value_at(int x, int y) const { return value_[index(x, y)]; }
    bool is_sink(int x, int y) const { return sink_[index(x, y)] != 0; }

    void set_sink(int x, int y, bool sink) {
        sink_[index(x, y)] = sink ? 1 : 0;
        if (sink) value_[index(x, y)] = 0.0;
    }

    // Adds amount at a cell; sinks stay at zero. Throws std::out_of_range for
    // cells outside the lattice. Amount may be negative (repellents).
    void deposit(Cell cell, double amount);

    // Point sample by cell containment: floor of each coordinate. Returns 0
    // off-lattice and at sink cells.
    double sample(double px, double py) const {
        const int cx = floor_to_int(px);
        const int cy = floor_to_int(py);
        if (!in_bounds(cx, cy)) return 0.0;
        return value_[index(cx, cy)];
    }

    // Re-applies the sink clamp; idempotent.
    void clamp_sinks();

    const std::vector<double>& values() const { return value_; }
    std::vector<double>& values_mutable() { return value_; }
    const std::vector<std::uint8_t>& sink_mask() const { return sink_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> value_;
    std::vector<std::uint8_t> sink_;
};

// Simultaneous mean-filter step from a snapshot of the field: every non-sink
// cell becomes damping * mean of its kernel window, with out-of-bounds and
// sink samples contributing zero but still counted in the fixed divisor
// kernel_size^2. Sink cells are re-clamped to zero afterwards.
void diffuse_and_damp(ChemoLattice& lattice, const DiffusionParams& params);

// One particle id per cell at most; -1 marks an empty cell.
class OccupancyGrid {
public:
    static constexpr std::int32_t kEmpty = -1;

    OccupancyGrid() = default;
    OccupancyGrid(int width, int height)
        : width_(width),
          height_(height),
          occupant_(static_cast<std::size_t>(width) * height, kEmpty) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    std::int32_t occupant(int x, int y) const { return occupant_[index(x, y)]; }
    bool occupied(int x, int y) const { return occupant_[index(x, y)] != kEmpty; }

    void place(int x, int y, std::int32_t id) { occupant_[index(x, y)] = id; }
    void clear(int x, int y) { occupant_[index(x, y)] = kEmpty; }

    std::size_t count_occupied() const;
    const std::vector<std::int32_t>& cells() const { return occupant_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::int32_t> occupant_;
};

// Summed-area table over cell occupancy; census queries over k x k windows in
// O(1). Windows clip at the lattice edge (outside cells hold no particles).
class CountIntegral {
public:
    void build(const OccupancyGrid& occ);

    // Number of occupied cells in the window of given odd size centered on
    // (cx, cy).
    int window_count(int cx, int cy, int window) const {
        const int r = window / 2;
        const int x0 = std::max(0, cx - r);
        const int y0 = std::max(0, cy - r);
        const int x1 = std::min(width_ - 1, cx + r);
        const int y1 = std::min(height_ - 1, cy + r);
        if (x0 > x1 || y0 > y1) return 0;
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }

private:
    int at(int x, int y) const { return sums_[static_cast<std::size_t>(y) * (width_ + 1) + x]; }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::int32_t> sums_;
};

}  // namespace morph
