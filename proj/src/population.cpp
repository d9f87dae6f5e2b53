#include "morph/population.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace morph {

Population::Population(int width, int height, std::uint64_t seed)
    : occ_(width, height), rng_(seed) {}

Population Population::initialize(const Arena& arena, double density, InitMode mode,
                                  std::uint64_t seed) {
    if (!(density > 0.0 && density <= 1.0))
        throw std::runtime_error("init_density must be in (0, 1], got " + std::to_string(density));

    Population pop(arena.width(), arena.height(), seed);
    for (int y = 0; y < arena.height(); ++y) {
        for (int x = 0; x < arena.width(); ++x) {
            const CellClass cc = arena.cell_class(x, y);
            bool eligible = (cc == CellClass::Habitable || cc == CellClass::Source);
            if (!eligible && cc == CellClass::Obstacle && mode == InitMode::FullCover)
                eligible = arena.enterable(x, y);
            if (!eligible) continue;
            if (pop.rng_.uniform_double() >= density) continue;
            pop.spawn_in_cell(x, y);
        }
    }
    return pop;
}

// Random sub-cell position and orientation; the position is clamped so its
// float rounding cannot escape the chosen cell.
std::int32_t Population::spawn_in_cell(int cx, int cy) {
    float fx = static_cast<float>(cx + rng_.uniform_double());
    float fy = static_cast<float>(cy + rng_.uniform_double());
    if (floor_to_int(fx) != cx) fx = std::nextafterf(static_cast<float>(cx + 1), 0.0f);
    if (floor_to_int(fy) != cy) fy = std::nextafterf(static_cast<float>(cy + 1), 0.0f);
    double hx, hy;
    rng_.unit_vector(hx, hy);
    return spawn(fx, fy, hx, hy);
}

std::int32_t Population::spawn(double px, double py, double hx, double hy) {
    Particle p;
    p.x = static_cast<float>(px);
    p.y = static_cast<float>(py);
    p.hx = static_cast<float>(hx);
    p.hy = static_cast<float>(hy);
    p.cx = static_cast<std::int16_t>(floor_to_int(p.x));
    p.cy = static_cast<std::int16_t>(floor_to_int(p.y));
    p.moved_last_step = false;
    if (!occ_.in_bounds(p.cx, p.cy) || occ_.occupied(p.cx, p.cy))
        throw std::logic_error("spawn into invalid or occupied cell");
    const std::int32_t id = static_cast<std::int32_t>(particles_.size());
    particles_.push_back(p);
    occ_.place(p.cx, p.cy, id);
    return id;
}

void Population::remove(std::int32_t index) {
    const std::int32_t last = static_cast<std::int32_t>(particles_.size()) - 1;
    occ_.clear(particles_[index].cx, particles_[index].cy);
    if (index != last) {
        particles_[index] = particles_[last];
        occ_.place(particles_[index].cx, particles_[index].cy, index);
    }
    particles_.pop_back();
}

void Population::refill_permutation(std::size_t n) {
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = static_cast<std::int32_t>(i);
    rng_.shuffle(perm_);
}

void Population::sensory_pass(const ChemoLattice& lattice, const AgentParams& agent,
                              const AgentKinematics& kin, int threads) {
    const std::size_t n = particles_.size();
    if (threads > 1 && n > 1024) {
        // Sensing is independent per particle, so chunked iteration replaces
        // the permutation. Each chunk gets its own stream seeded from the
        // master draw sequence.
        const std::size_t nthreads = std::min<std::size_t>(threads, 64);
        std::vector<std::uint64_t> seeds(nthreads);
        for (auto& s : seeds) s = rng_.next_u64();
        std::vector<std::thread> workers;
        const std::size_t chunk = (n + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo >= hi) break;
            workers.emplace_back([this, &lattice, &agent, &kin, lo, hi, seed = seeds[t]] {
                Rng local(seed);
                for (std::size_t i = lo; i < hi; ++i)
                    sense_and_orient(particles_[i], lattice, agent, kin, local);
            });
        }
        for (auto& w : workers) w.join();
        return;
    }
    // Sensing reads only the field and the particle's own state, so iteration
    // order cannot create ordering artifacts; array order keeps the lattice
    // reads local (the array is kept near row-major by reorder_by_cell).
    for (std::size_t i = 0; i < n; ++i)
        sense_and_orient(particles_[i], lattice, agent, kin, rng_);
}

void Population::motor_pass(ChemoLattice& lattice, const Arena& arena,
                            const AgentParams& agent) {
    refill_permutation(particles_.size());
    const auto& enterable = arena.enterable_mask();
    const std::size_t n = perm_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 8 < n) __builtin_prefetch(&particles_[perm_[i + 8]]);
        const std::int32_t id = perm_[i];
        attempt_move(particles_[id], id, occ_, lattice, enterable, agent, rng_);
    }
}

void Population::growth_pass(const Arena& arena, const GrowthShrinkParams& params) {
    counts_.build(occ_);  // census against the pass-start occupancy
    const std::size_t tested = particles_.size();  // spawns are not re-tested
    refill_permutation(tested);

    const int spawn_r = params.spawn_window / 2;
    const auto& enterable = arena.enterable_mask();
    spawn_spots_.clear();
    for (std::size_t i = 0; i < tested; ++i) {
        const Particle& p = particles_[perm_[i]];
        if (!p.moved_last_step) continue;
        const int c = census(counts_, p, params.census_window);
        if (c < params.growth_min || c > params.growth_max) continue;

        spawn_spots_.clear();
        for (int dy = -spawn_r; dy <= spawn_r; ++dy) {
            for (int dx = -spawn_r; dx <= spawn_r; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = p.cx + dx;
                const int ny = p.cy + dy;
                if (!occ_.in_bounds(nx, ny)) continue;
                const std::size_t idx = occ_.index(nx, ny);
                if (!enterable[idx] || occ_.cells()[idx] != OccupancyGrid::kEmpty) continue;
                spawn_spots_.push_back(static_cast<std::int32_t>(idx));
            }
        }
        if (spawn_spots_.empty()) continue;
        ++stats_.births;
        const std::int32_t idx = spawn_spots_[rng_.uniform_index(spawn_spots_.size())];
        spawn_in_cell(static_cast<int>(idx % occ_.width()), static_cast<int>(idx / occ_.width()));
    }
}

void Population::build_census_grid(int window) {
    // Separable sliding-window occupancy count; clipped at the lattice edge.
    const int w = occ_.width(), h = occ_.height();
    const int r = window / 2;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    census_row_.resize(n);
    census_grid_.resize(n);
    const std::int32_t* cells = occ_.cells().data();
    for (int y = 0; y < h; ++y) {
        const std::int32_t* src = cells + static_cast<std::size_t>(y) * w;
        std::int16_t* dst = census_row_.data() + static_cast<std::size_t>(y) * w;
        int acc = 0;
        for (int x = 0; x < std::min(r, w); ++x) acc += src[x] != OccupancyGrid::kEmpty;
        for (int x = 0; x < w; ++x) {
            if (x + r < w) acc += src[x + r] != OccupancyGrid::kEmpty;
            if (x - r - 1 >= 0) acc -= src[x - r - 1] != OccupancyGrid::kEmpty;
            dst[x] = static_cast<std::int16_t>(acc);
        }
    }
    std::vector<int> coltmp(w, 0);
    for (int y = 0; y < std::min(r, h); ++y) {
        const std::int16_t* row = census_row_.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) coltmp[x] += row[x];
    }
    for (int y = 0; y < h; ++y) {
        if (y + r < h) {
            const std::int16_t* row = census_row_.data() + static_cast<std::size_t>(y + r) * w;
            for (int x = 0; x < w; ++x) coltmp[x] += row[x];
        }
        if (y - r - 1 >= 0) {
            const std::int16_t* row = census_row_.data() + static_cast<std::size_t>(y - r - 1) * w;
            for (int x = 0; x < w; ++x) coltmp[x] -= row[x];
        }
        std::int16_t* dst = census_grid_.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) dst[x] = static_cast<std::int16_t>(coltmp[x]);
    }
}

void Population::survival_pass(const GrowthShrinkParams& params) {
    // Overcrowding deletions run sequentially in a fresh random order against
    // a live census: each deletion relieves its 9x9 neighborhood, so erosion
    // stops at the survival threshold instead of wiping out every cell of a
    // packed region in one pass.
    build_census_grid(params.census_window);
    const int w = occ_.width(), h = occ_.height();

    const std::size_t n = particles_.size();
    refill_permutation(n);
    dead_.assign(n, 0);
    const int r = params.census_window / 2;
    std::size_t ndead = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::int32_t i = perm_[k];
        const Particle& p = particles_[i];
        if (census_grid_[static_cast<std::size_t>(p.cy) * w + p.cx] > params.survival_max) {
            ++stats_.deaths;
            dead_[i] = 1;
            ++ndead;
            occ_.clear(p.cx, p.cy);
            const int x0 = std::max(0, p.cx - r), x1 = std::min(w - 1, p.cx + r);
            const int y0 = std::max(0, p.cy - r), y1 = std::min(h - 1, p.cy + r);
            for (int y = y0; y <= y1; ++y)
                for (int x = x0; x <= x1; ++x)
                    --census_grid_[static_cast<std::size_t>(y) * w + x];
        }
    }
    if (ndead == 0) return;
    std::size_t dst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dead_[i]) continue;
        if (dst != i) {
            particles_[dst] = particles_[i];
            occ_.place(particles_[dst].cx, particles_[dst].cy, static_cast<std::int32_t>(dst));
        }
        ++dst;
    }
    particles_.resize(dst);
}

void Population::reorder_by_cell() {
    // Rebuild the particle array in row-major cell order. Iterating a sorted
    // array keeps the passes' lattice reads local; done occasionally since
    // 1 px steps erode locality slowly. Occupant ids are rebound in place.
    const std::size_t n = particles_.size();
    reorder_tmp_.resize(n);
    std::size_t out = 0;
    const std::int32_t* cells = occ_.cells().data();
    const std::size_t ncells = occ_.cells().size();
    for (std::size_t i = 0; i < ncells; ++i) {
        const std::int32_t id = cells[i];
        if (id != OccupancyGrid::kEmpty) reorder_tmp_[out++] = particles_[id];
    }
    particles_.swap(reorder_tmp_);
    for (std::size_t i = 0; i < n; ++i)
        occ_.place(particles_[i].cx, particles_[i].cy, static_cast<std::int32_t>(i));
}

void Population::scheduler_step(const Arena& arena, ExposureState& exposure,
                                ChemoLattice& lattice, const SchedulerParams& params) {
    if ((step_counter_ & 15) == 0 && particles_.size() > 4096) reorder_by_cell();
    if (arena.obstacle_mode == ObstacleMode::Exposure) {
        counts_.build(occ_);
        exposure = update_exposure(arena, counts_);
    }
    project_stimuli(arena, exposure, lattice);

    const AgentKinematics kin = AgentKinematics::from(params.agent);
    sensory_pass(lattice, params.agent, kin, params.sensory_threads);
    motor_pass(lattice, arena, params.agent);

    if (step_counter_ % params.growth.division_interval == 0) {
        growth_pass(arena, params.growth);
        ++stats_.growth_passes;
    }
    if (step_counter_ % params.growth.removal_interval == 0) {
        survival_pass(params.growth);
        ++stats_.survival_passes;
    }

    diffuse_and_damp(lattice, params.diffusion);
    ++step_counter_;
}

bool Population::consistent() const {
    std::size_t registered = 0;
    for (int y = 0; y < occ_.height(); ++y) {
        for (int x = 0; x < occ_.width(); ++x) {
            const std::int32_t id = occ_.occupant(x, y);
            if (id == OccupancyGrid::kEmpty) continue;
            ++registered;
            if (id < 0 || static_cast<std::size_t>(id) >= particles_.size()) return false;
            const Particle& p = particles_[id];
            if (p.cx != x || p.cy != y) return false;
            if (floor_to_int(p.x) != x || floor_to_int(p.y) != y) return false;
        }
    }
    return registered == particles_.size();
}

}  // namespace morph
