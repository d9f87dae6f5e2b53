#include "morph/arena.hpp"

#include <stdexcept>

namespace morph {

namespace {

constexpr int kMinSide = 16;
constexpr int kMaxSide = 4096;

CellClass class_for_code(std::uint8_t code, int x, int y, const std::string& origin) {
    switch (code) {
        case kCodeHabitable: return CellClass::Habitable;
        case kCodeWall: return CellClass::Wall;
        case kCodeObstacle: return CellClass::Obstacle;
        case kCodeSource: return CellClass::Source;
        default:
            throw std::runtime_error(origin + ": unknown cell code " + std::to_string(code) +
                                     " at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
}

}  // namespace

double Source::centroid_x() const {
    double s = 0.0;
    for (const Cell& c : cells) s += c.x;
    return cells.empty() ? 0.0 : s / static_cast<double>(cells.size());
}

double Source::centroid_y() const {
    double s = 0.0;
    for (const Cell& c : cells) s += c.y;
    return cells.empty() ? 0.0 : s / static_cast<double>(cells.size());
}

Arena::Arena(int width, int height, std::vector<CellClass> classes)
    : width_(width), height_(height), classes_(std::move(classes)) {
    if (width_ < 3 || height_ < 3) throw std::runtime_error("arena smaller than 3x3");
    if (classes_.size() != static_cast<std::size_t>(width_) * height_)
        throw std::runtime_error("arena class grid size mismatch");

    // Number 8-connected groups of source cells in row-major discovery order.
    std::vector<std::uint8_t> seen(classes_.size(), 0);
    std::vector<Cell> stack;
    int next_id = 1;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (classes_[index(x, y)] != CellClass::Source || seen[index(x, y)]) continue;
            Source src;
            src.id = next_id++;
            stack.assign(1, Cell{x, y});
            seen[index(x, y)] = 1;
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                src.cells.push_back(c);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = c.x + dx;
                        const int ny = c.y + dy;
                        if (!in_bounds(nx, ny) || seen[index(nx, ny)]) continue;
                        if (classes_[index(nx, ny)] != CellClass::Source) continue;
                        seen[index(nx, ny)] = 1;
                        stack.push_back(Cell{nx, ny});
                    }
                }
            }
            sources_.push_back(std::move(src));
        }
    }
    finalize();
}

Arena Arena::from_image(const Image8& img, const std::string& origin) {
    if (img.width < kMinSide || img.width > kMaxSide || img.height < kMinSide ||
        img.height > kMaxSide)
        throw std::runtime_error(origin + ": dimensions " + std::to_string(img.width) + "x" +
                                 std::to_string(img.height) + " outside [" +
                                 std::to_string(kMinSide) + ", " + std::to_string(kMaxSide) + "]");
    std::vector<CellClass> classes(img.pixels.size());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            classes[static_cast<std::size_t>(y) * img.width + x] =
                class_for_code(img.at(x, y), x, y, origin);

    Arena arena(img.width, img.height, std::move(classes));
    if (arena.sources_.empty()) throw std::runtime_error(origin + ": no source pixels");
    return arena;
}

Arena Arena::load(const std::string& path) { return from_image(read_pgm(path), path); }

const Source* Arena::find_source(int id) const {
    for (const Source& s : sources_)
        if (s.id == id) return &s;
    return nullptr;
}

int Arena::active_source_count() const {
    int n = 0;
    for (const Source& s : sources_)
        if (s.active) ++n;
    return n;
}

void Arena::remove_source(int id) {
    for (Source& s : sources_) {
        if (s.id != id) continue;
        if (!s.active) throw std::runtime_error("source " + std::to_string(id) + " already removed");
        s.active = false;
        return;
    }
    throw std::runtime_error("unknown source id " + std::to_string(id));
}

void Arena::finalize() {
    const std::size_t n = classes_.size();
    enterable_.assign(n, 0);
    wall_like_.assign(n, 0);
    wall_adjacent_.clear();
    obstacle_cells_.clear();

    const bool exposure = obstacle_mode == ObstacleMode::Exposure;
    for (std::size_t i = 0; i < n; ++i) {
        switch (classes_[i]) {
            case CellClass::Habitable:
            case CellClass::Source:
                enterable_[i] = 1;
                break;
            case CellClass::Wall:
                wall_like_[i] = 1;
                break;
            case CellClass::Obstacle:
                if (exposure) {
                    enterable_[i] = 1;
                } else {
                    wall_like_[i] = 1;
                }
                break;
        }
    }

    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const std::size_t i = index(x, y);
            if (classes_[i] == CellClass::Obstacle) obstacle_cells_.push_back(Cell{x, y});
            if (!enterable_[i]) continue;
            bool adjacent = false;
            for (int dy = -1; dy <= 1 && !adjacent; ++dy)
                for (int dx = -1; dx <= 1 && !adjacent; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (in_bounds(nx, ny) && wall_like_[index(nx, ny)]) adjacent = true;
                }
            if (adjacent) wall_adjacent_.push_back(Cell{x, y});
        }
    }
}

void Arena::apply_sinks(ChemoLattice& lattice) const {
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            lattice.set_sink(x, y, wall_like_[index(x, y)] != 0);
}

ExposureState update_exposure(const Arena& arena, const OccupancyGrid& occ) {
    CountIntegral counts;
    counts.build(occ);
    return update_exposure(arena, counts);
}

ExposureState update_exposure(const Arena& arena, const CountIntegral& counts) {
    ExposureState state;
    const auto& cells = arena.obstacle_cells();
    state.exposed.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const int n = counts.window_count(cells[i].x, cells[i].y, arena.exposure_window);
        state.exposed[i] = (n == 0) ? 1 : 0;
    }
    return state;
}

void project_stimuli(const Arena& arena, const ExposureState& exposure, ChemoLattice& lattice) {
    for (const Source& src : arena.sources()) {
        if (!src.active) continue;
        for (const Cell& c : src.cells) lattice.deposit(c, src.strength);
    }
    if (arena.wall_repellent_strength != 0.0) {
        for (const Cell& c : arena.wall_adjacent_cells())
            lattice.deposit(c, arena.wall_repellent_strength);
    }
    if (arena.obstacle_mode == ObstacleMode::Exposure) {
        const auto& cells = arena.obstacle_cells();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double amount =
                exposure.exposed[i] ? arena.exposed_strength : arena.covered_strength;
            lattice.deposit(cells[i], amount);
        }
    }
}

}  // namespace morph
