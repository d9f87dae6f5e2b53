#pragma once

#include <cstdint>
#include <vector>

#include "morph/agents.hpp"
#include "morph/arena.hpp"
#include "morph/lattice.hpp"
#include "morph/rng.hpp"

namespace morph {

struct GrowthShrinkParams {
    int census_window = 9;      // odd
    int growth_min = 1;
    int growth_max = 10;
    int survival_max = 79;      // census above this deletes the particle
    int spawn_window = 3;       // odd
    int division_interval = 10; // steps between growth passes
    int removal_interval = 2;   // steps between survival passes

    bool valid() const {
        return census_window >= 1 && (census_window & 1) == 1 && spawn_window >= 1 &&
               (spawn_window & 1) == 1 && growth_min <= growth_max && growth_min >= 0 &&
               survival_max < census_window * census_window && division_interval >= 1 &&
               removal_interval >= 1;
    }
};

enum class InitMode { HabitableOnly, FullCover };

struct PopulationStats {
    std::int64_t births = 0;
    std::int64_t deaths = 0;
    std::int64_t growth_passes = 0;
    std::int64_t survival_passes = 0;
};

struct SchedulerParams {
    AgentParams agent;
    GrowthShrinkParams growth;
    DiffusionParams diffusion;
    int sensory_threads = 1;  // > 1 runs the sensory pass chunked over threads
};

// Particle collection, its occupancy grid, the master random stream, and the
// step counter. All scheduler passes mutate state through this object so one
// sequential draw order is preserved in deterministic mode.
class Population {
public:
    Population(int width, int height, std::uint64_t seed);

    // Bernoulli fill of eligible cells: habitable and source cells, plus
    // obstacle cells in full-cover mode when the arena keeps them enterable.
    // Cells are visited row-major; density must lie in (0, 1].
    static Population initialize(const Arena& arena, double density, InitMode mode,
                                 std::uint64_t seed);

    std::size_t size() const { return particles_.size(); }
    const std::vector<Particle>& particles() const { return particles_; }
    std::vector<Particle>& particles_mutable() { return particles_; }
    const OccupancyGrid& occupancy() const { return occ_; }
    OccupancyGrid& occupancy_mutable() { return occ_; }
    Rng& rng() { return rng_; }
    std::int64_t step_counter() const { return step_counter_; }

    // Registers a new particle at a continuous position with the given
    // heading. The target cell must be empty.
    std::int32_t spawn(double px, double py, double hx, double hy);
    // Spawns with random sub-cell position and orientation drawn from the
    // population stream.
    std::int32_t spawn_in_cell(int cx, int cy);

    // Removes by index; the last particle takes its slot.
    void remove(std::int32_t index);

    // One full scheduler step: stimulus projection, sensory and motor passes
    // in fresh random orders, growth and survival at their intervals, then
    // diffusion. Exposure state is recomputed here when the arena runs in
    // exposure mode.
    void scheduler_step(const Arena& arena, ExposureState& exposure, ChemoLattice& lattice,
                        const SchedulerParams& params);

    // Individual passes, exposed for tests.
    void sensory_pass(const ChemoLattice& lattice, const AgentParams& agent,
                      const AgentKinematics& kin, int threads);
    void motor_pass(ChemoLattice& lattice, const Arena& arena, const AgentParams& agent);
    // Divides particles sitting in sparse company (census within
    // [growth_min, growth_max], self included) that moved this step, into a
    // random empty cell of the spawn window. The tested list and the census
    // are pass-start snapshots; spawn cells are checked live.
    void growth_pass(const Arena& arena, const GrowthShrinkParams& params);
    // Deletes overcrowded particles (census above survival_max) sequentially
    // in a fresh random order against a live census.
    void survival_pass(const GrowthShrinkParams& params);

    // Number of particles in the window centered on p's cell, including p.
    static int census(const CountIntegral& counts, const Particle& p, int window) {
        return counts.window_count(p.cx, p.cy, window);
    }

    bool consistent() const;  // one-per-cell bookkeeping check
    const PopulationStats& stats() const { return stats_; }

    // Sorts the particle array into row-major cell order and rebinds ids.
    void reorder_by_cell();

private:
    void refill_permutation(std::size_t n);
    void build_census_grid(int window);

    std::vector<Particle> particles_;
    OccupancyGrid occ_;
    Rng rng_;
    std::int64_t step_counter_ = 0;

    PopulationStats stats_;
    std::vector<std::int32_t> perm_;
    std::vector<std::int32_t> spawn_spots_;
    std::vector<std::int16_t> census_grid_;
    std::vector<std::int16_t> census_row_;
    std::vector<std::uint8_t> dead_;
    std::vector<Particle> reorder_tmp_;
    CountIntegral counts_;
};

}  // namespace morph
