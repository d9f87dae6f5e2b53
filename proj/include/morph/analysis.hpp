#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morph/arena.hpp"
#include "morph/lattice.hpp"

namespace morph {

// Per-sample run instrumentation. Optional fields are absent when undefined
// (disconnected path, no walls, empty occupancy).
struct RunMetrics {
    std::int64_t step = 0;
    std::size_t population = 0;
    int component_count = 0;
    bool sources_connected = false;
    std::optional<double> occupied_path_length;
    std::optional<double> min_wall_clearance;
    int hole_count = 0;
};

// 8-connected labeling of set cells. Labels start at 0; unset cells get -1.
// Returns the number of components.
int label_components(const std::vector<std::uint8_t>& set, int w, int h,
                     std::vector<std::int32_t>& labels);

// Octile shortest path (unit cardinal, sqrt(2) diagonal steps) over passable
// cells from any seed to any target cell. nullopt when unreachable.
std::optional<double> grid_shortest_path(const std::vector<std::uint8_t>& passable, int w, int h,
                                         const std::vector<Cell>& seeds,
                                         const std::vector<Cell>& targets);

// Independent shortest-path reference between two sources over every cell a
// particle could stand on (the arena's enterable mask, so the occupied-path
// graph is always a subgraph of this one).
std::optional<double> oracle_shortest_path(const Arena& arena, int source_a, int source_b);

// Same metric restricted to occupied cells. Endpoints are the occupied cells
// nearest each source centroid; a source with no occupied cell within
// Chebyshev distance 2 of its pixels counts as disconnected.
std::optional<double> occupied_path_length(const OccupancyGrid& occ, const Arena& arena,
                                           int source_a, int source_b);

// Exact squared Euclidean distance transform to the nearest feature cell
// (Felzenszwalb-Huttenlocher). Cells on features get 0; a feature-free grid
// gets infinity everywhere.
std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int w,
                                               int h);

// Minimum over occupied cells of the Euclidean distance to the nearest wall
// or impassable-obstacle cell. Absent when nothing is occupied or the arena
// has no such cells.
std::optional<double> wall_clearance(const OccupancyGrid& occ, const Arena& arena);
std::optional<double> wall_clearance(const OccupancyGrid& occ,
                                     const std::vector<double>& wall_sqdist);

// Bounded pockets of unoccupied cells: 4-connected unoccupied regions with no
// path to the lattice border through unoccupied cells (8-connected foreground,
// 4-connected background).
int hole_count(const std::vector<std::uint8_t>& occupied, int w, int h);
std::vector<std::vector<Cell>> hole_regions(const std::vector<std::uint8_t>& occupied, int w,
                                            int h);

// True when every active source (at least two) has an occupied cell within
// Chebyshev distance 2 and one occupied component reaches all of them.
bool sources_connected(const OccupancyGrid& occ, const Arena& arena);

// The source pair measured by path metrics: lowest and highest active ids.
std::optional<std::pair<int, int>> metric_source_pair(const Arena& arena);

// Caches the static per-arena pieces (wall distance transform, oracle lengths
// per source pair) across samples of one run.
class MetricsContext {
public:
    explicit MetricsContext(const Arena& arena);

    RunMetrics compute(std::int64_t step, const OccupancyGrid& occ);
    std::optional<double> oracle_length();
    const std::vector<double>& wall_sqdist() const { return wall_sqdist_; }

private:
    const Arena& arena_;
    std::vector<double> wall_sqdist_;
    bool has_walls_ = false;
    // oracle cache keyed by source pair
    std::vector<std::pair<std::pair<int, int>, std::optional<double>>> oracle_cache_;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);
void write_metrics_csv(const std::vector<RunMetrics>& series, const std::string& path);

}  // namespace morph
