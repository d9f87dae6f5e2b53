#include "morph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>

namespace morph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309514547462185873883;

const int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
const int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

std::vector<std::uint8_t> occupied_mask(const OccupancyGrid& occ) {
    std::vector<std::uint8_t> mask(occ.cells().size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = occ.cells()[i] != OccupancyGrid::kEmpty ? 1 : 0;
    return mask;
}

// Occupied cell closest to the source centroid, restricted to cells within
// Chebyshev distance 2 of the source's pixels. Row-major tie-break.
std::optional<Cell> source_anchor(const OccupancyGrid& occ, const Source& src) {
    const double cx = src.centroid_x();
    const double cy = src.centroid_y();
    std::optional<Cell> best;
    double best_d = kInf;
    std::vector<std::uint8_t> visited(occ.cells().size(), 0);
    for (const Cell& c : src.cells) {
        for (int dy = -2; dy <= 2; ++dy) {
            for (int dx = -2; dx <= 2; ++dx) {
                const int x = c.x + dx;
                const int y = c.y + dy;
                if (!occ.in_bounds(x, y)) continue;
                const std::size_t i = occ.index(x, y);
                if (visited[i]) continue;
                visited[i] = 1;
                if (!occ.occupied(x, y)) continue;
                const double d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                if (d < best_d || (d == best_d && best &&
                                   (y < best->y || (y == best->y && x < best->x)))) {
                    best_d = d;
                    best = Cell{x, y};
                }
            }
        }
    }
    return best;
}

// 1D lower envelope pass of the Felzenszwalb-Huttenlocher transform. Only
// finite parabolas enter the envelope; an all-infinite row stays infinite.
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
            std::vector<double>& z, int n) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
        while (s <= z[k]) {
            --k;
            if (k < 0) break;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * (q - v[k]));
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
        } else {
            ++k;
            v[k] = q;
            z[k] = s;
            z[k + 1] = kInf;
        }
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const int p = v[j];
        d[q] = static_cast<double>(q - p) * (q - p) + f[p];
    }
}

}  // namespace

int label_components(const std::vector<std::uint8_t>& set, int w, int h,
                     std::vector<std::int32_t>& labels) {
    labels.assign(set.size(), -1);
    int count = 0;
    std::vector<std::int32_t> stack;
    for (std::size_t start = 0; start < set.size(); ++start) {
        if (!set[start] || labels[start] != -1) continue;
        const int label = count++;
        stack.assign(1, static_cast<std::int32_t>(start));
        labels[start] = label;
        while (!stack.empty()) {
            const std::int32_t i = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(i % w);
            const int y = static_cast<int>(i / w);
            for (int d = 0; d < 8; ++d) {
                const int nx = x + kDx8[d];
                const int ny = y + kDy8[d];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::int32_t ni = ny * w + nx;
                if (!set[ni] || labels[ni] != -1) continue;
                labels[ni] = label;
                stack.push_back(ni);
            }
        }
    }
    return count;
}

std::optional<double> grid_shortest_path(const std::vector<std::uint8_t>& passable, int w, int h,
                                         const std::vector<Cell>& seeds,
                                         const std::vector<Cell>& targets) {
    std::vector<double> dist(passable.size(), kInf);
    std::vector<std::uint8_t> is_target(passable.size(), 0);
    int targets_left = 0;
    for (const Cell& c : targets) {
        if (c.x < 0 || c.y < 0 || c.x >= w || c.y >= h) continue;
        const std::size_t i = static_cast<std::size_t>(c.y) * w + c.x;
        if (passable[i] && !is_target[i]) {
            is_target[i] = 1;
            ++targets_left;
        }
    }
    if (targets_left == 0) return std::nullopt;

    using Item = std::pair<double, std::int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (const Cell& c : seeds) {
        if (c.x < 0 || c.y < 0 || c.x >= w || c.y >= h) continue;
        const std::size_t i = static_cast<std::size_t>(c.y) * w + c.x;
        if (!passable[i]) continue;
        if (dist[i] > 0.0) {
            dist[i] = 0.0;
            heap.push({0.0, static_cast<std::int32_t>(i)});
        }
    }
    while (!heap.empty()) {
        const auto [d, i] = heap.top();
        heap.pop();
        if (d > dist[i]) continue;
        if (is_target[i]) return d;
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        for (int k = 0; k < 8; ++k) {
            const int nx = x + kDx8[k];
            const int ny = y + kDy8[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::int32_t ni = ny * w + nx;
            if (!passable[ni]) continue;
            const double nd = d + (k < 4 ? 1.0 : kSqrt2);
            if (nd < dist[ni]) {
                dist[ni] = nd;
                heap.push({nd, ni});
            }
        }
    }
    return std::nullopt;
}

std::optional<double> oracle_shortest_path(const Arena& arena, int source_a, int source_b) {
    const Source* a = arena.find_source(source_a);
    const Source* b = arena.find_source(source_b);
    if (!a || !b) throw std::runtime_error("oracle_shortest_path: unknown source id");
    return grid_shortest_path(arena.enterable_mask(), arena.width(), arena.height(), a->cells,
                              b->cells);
}

std::optional<double> occupied_path_length(const OccupancyGrid& occ, const Arena& arena,
                                           int source_a, int source_b) {
    const Source* a = arena.find_source(source_a);
    const Source* b = arena.find_source(source_b);
    if (!a || !b) throw std::runtime_error("occupied_path_length: unknown source id");
    const auto anchor_a = source_anchor(occ, *a);
    const auto anchor_b = source_anchor(occ, *b);
    if (!anchor_a || !anchor_b) return std::nullopt;
    return grid_shortest_path(occupied_mask(occ), occ.width(), occ.height(), {*anchor_a},
                              {*anchor_b});
}

std::vector<double> squared_distance_transform(const std::vector<std::uint8_t>& feature, int w,
                                               int h) {
    std::vector<double> dist(feature.size());
    for (std::size_t i = 0; i < feature.size(); ++i) dist[i] = feature[i] ? 0.0 : kInf;

    const int n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int x = 0; x < w; ++x) {  // columns first
        for (int y = 0; y < h; ++y) f[y] = dist[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z, h);
        for (int y = 0; y < h; ++y) dist[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = dist[static_cast<std::size_t>(y) * w + x];
        edt_1d(f, d, v, z, w);
        for (int x = 0; x < w; ++x) dist[static_cast<std::size_t>(y) * w + x] = d[x];
    }
    return dist;
}

std::optional<double> wall_clearance(const OccupancyGrid& occ,
                                     const std::vector<double>& wall_sqdist) {
    double best = kInf;
    const auto& cells = occ.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == OccupancyGrid::kEmpty) continue;
        if (wall_sqdist[i] < best) best = wall_sqdist[i];
    }
    if (best == kInf) return std::nullopt;
    return std::sqrt(best);
}

std::optional<double> wall_clearance(const OccupancyGrid& occ, const Arena& arena) {
    bool any_wall = false;
    for (std::uint8_t v : arena.wall_like_mask())
        if (v) {
            any_wall = true;
            break;
        }
    if (!any_wall) return std::nullopt;
    return wall_clearance(occ, squared_distance_transform(arena.wall_like_mask(), arena.width(),
                                                          arena.height()));
}

std::vector<std::vector<Cell>> hole_regions(const std::vector<std::uint8_t>& occupied, int w,
                                            int h) {
    // Flood the background from the border through unoccupied cells
    // (4-connected), then group what is left.
    std::vector<std::uint8_t> visited(occupied.size(), 0);
    std::vector<std::int32_t> stack;
    auto push_if_open = [&](int x, int y) {
        const std::int32_t i = y * w + x;
        if (!occupied[i] && !visited[i]) {
            visited[i] = 1;
            stack.push_back(i);
        }
    };
    for (int x = 0; x < w; ++x) {
        push_if_open(x, 0);
        push_if_open(x, h - 1);
    }
    for (int y = 0; y < h; ++y) {
        push_if_open(0, y);
        push_if_open(w - 1, y);
    }
    const int dx4[4] = {1, -1, 0, 0};
    const int dy4[4] = {0, 0, 1, -1};
    while (!stack.empty()) {
        const std::int32_t i = stack.back();
        stack.pop_back();
        const int x = static_cast<int>(i % w);
        const int y = static_cast<int>(i / w);
        for (int k = 0; k < 4; ++k) {
            const int nx = x + dx4[k];
            const int ny = y + dy4[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            push_if_open(nx, ny);
        }
    }

    std::vector<std::vector<Cell>> holes;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::int32_t start = y0 * w + x0;
            if (occupied[start] || visited[start]) continue;
            holes.emplace_back();
            auto& region = holes.back();
            visited[start] = 1;
            stack.assign(1, start);
            while (!stack.empty()) {
                const std::int32_t i = stack.back();
                stack.pop_back();
                const int x = static_cast<int>(i % w);
                const int y = static_cast<int>(i / w);
                region.push_back(Cell{x, y});
                for (int k = 0; k < 4; ++k) {
                    const int nx = x + dx4[k];
                    const int ny = y + dy4[k];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::int32_t ni = ny * w + nx;
                    if (occupied[ni] || visited[ni]) continue;
                    visited[ni] = 1;
                    stack.push_back(ni);
                }
            }
        }
    }
    return holes;
}

int hole_count(const std::vector<std::uint8_t>& occupied, int w, int h) {
    return static_cast<int>(hole_regions(occupied, w, h).size());
}

bool sources_connected(const OccupancyGrid& occ, const Arena& arena) {
    int active = 0;
    for (const Source& s : arena.sources())
        if (s.active) ++active;
    if (active < 2) return false;

    std::vector<std::int32_t> labels;
    label_components(occupied_mask(occ), occ.width(), occ.height(), labels);

    std::int32_t common = -1;
    for (const Source& s : arena.sources()) {
        if (!s.active) continue;
        const auto anchor = source_anchor(occ, s);
        if (!anchor) return false;
        const std::int32_t label = labels[occ.index(anchor->x, anchor->y)];
        if (common == -1) common = label;
        else if (label != common) return false;
    }
    return true;
}

std::optional<std::pair<int, int>> metric_source_pair(const Arena& arena) {
    int lo = 0, hi = 0, active = 0;
    for (const Source& s : arena.sources()) {
        if (!s.active) continue;
        if (active == 0) lo = hi = s.id;
        lo = std::min(lo, s.id);
        hi = std::max(hi, s.id);
        ++active;
    }
    if (active < 2) return std::nullopt;
    return std::make_pair(lo, hi);
}

MetricsContext::MetricsContext(const Arena& arena) : arena_(arena) {
    for (std::uint8_t v : arena.wall_like_mask())
        if (v) {
            has_walls_ = true;
            break;
        }
    if (has_walls_)
        wall_sqdist_ =
            squared_distance_transform(arena.wall_like_mask(), arena.width(), arena.height());
}

std::optional<double> MetricsContext::oracle_length() {
    const auto pair = metric_source_pair(arena_);
    if (!pair) return std::nullopt;
    for (const auto& [key, value] : oracle_cache_)
        if (key == *pair) return value;
    const auto value = oracle_shortest_path(arena_, pair->first, pair->second);
    oracle_cache_.push_back({*pair, value});
    return value;
}

RunMetrics MetricsContext::compute(std::int64_t step, const OccupancyGrid& occ) {
    RunMetrics m;
    m.step = step;
    m.population = occ.count_occupied();

    const auto mask = occupied_mask(occ);
    std::vector<std::int32_t> labels;
    m.component_count = label_components(mask, occ.width(), occ.height(), labels);
    m.sources_connected = sources_connected(occ, arena_);
    if (const auto pair = metric_source_pair(arena_))
        m.occupied_path_length = occupied_path_length(occ, arena_, pair->first, pair->second);
    if (has_walls_) m.min_wall_clearance = wall_clearance(occ, wall_sqdist_);
    m.hole_count = hole_count(mask, occ.width(), occ.height());
    return m;
}

std::string metrics_csv_header() {
    return "step,population,components,sources_connected,path_length,clearance,holes";
}

std::string metrics_csv_row(const RunMetrics& m) {
    char buf[192];
    char path[48] = "";
    char clear[48] = "";
    if (m.occupied_path_length) std::snprintf(path, sizeof(path), "%.6f", *m.occupied_path_length);
    if (m.min_wall_clearance) std::snprintf(clear, sizeof(clear), "%.6f", *m.min_wall_clearance);
    std::snprintf(buf, sizeof(buf), "%lld,%zu,%d,%d,%s,%s,%d", static_cast<long long>(m.step),
                  m.population, m.component_count, m.sources_connected ? 1 : 0, path, clear,
                  m.hole_count);
    return buf;
}

void write_metrics_csv(const std::vector<RunMetrics>& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << metrics_csv_header() << '\n';
    for (const RunMetrics& m : series) out << metrics_csv_row(m) << '\n';
    if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace morph
