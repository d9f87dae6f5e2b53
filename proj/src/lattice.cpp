#include "morph/lattice.hpp"

#include <stdexcept>
#include <string>

namespace morph {

void ChemoLattice::deposit(Cell cell, double amount) {
    if (!in_bounds(cell.x, cell.y))
        throw std::out_of_range("deposit at (" + std::to_string(cell.x) + "," +
                                std::to_string(cell.y) + ") outside " + std::to_string(width_) +
                                "x" + std::to_string(height_) + " lattice");
    const std::size_t i = index(cell.x, cell.y);
    if (sink_[i]) return;
    value_[i] += amount;
}

void ChemoLattice::clamp_sinks() {
    const std::size_t n = value_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (sink_[i]) value_[i] = 0.0;
}

void diffuse_and_damp(ChemoLattice& lattice, const DiffusionParams& params) {
    const int w = lattice.width();
    const int h = lattice.height();
    const int k = params.kernel_size;
    const int r = k / 2;
    const double scale = params.damping / (static_cast<double>(k) * k);

    // Separable: horizontal k-sums into a temp plane, then vertical k-sums.
    // Sink cells hold 0 by invariant, so reading the raw field already treats
    // them as zero contributions.
    static thread_local std::vector<double> rowsum;
    rowsum.assign(static_cast<std::size_t>(w) * h, 0.0);
    const std::vector<double>& v = lattice.values();

    if (k == 3) {
        for (int y = 0; y < h; ++y) {
            const double* src = v.data() + static_cast<std::size_t>(y) * w;
            double* dst = rowsum.data() + static_cast<std::size_t>(y) * w;
            dst[0] = src[0] + src[1];
            for (int x = 1; x < w - 1; ++x) dst[x] = src[x - 1] + src[x] + src[x + 1];
            dst[w - 1] = src[w - 2] + src[w - 1];
        }
    } else {
        for (int y = 0; y < h; ++y) {
            const double* src = v.data() + static_cast<std::size_t>(y) * w;
            double* dst = rowsum.data() + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                const int x0 = std::max(0, x - r);
                const int x1 = std::min(w - 1, x + r);
                double s = 0.0;
                for (int xx = x0; xx <= x1; ++xx) s += src[xx];
                dst[x] = s;
            }
        }
    }

    std::vector<double>& out = lattice.values_mutable();
    const std::vector<std::uint8_t>& sink = lattice.sink_mask();
    if (k == 3) {
        for (int y = 0; y < h; ++y) {
            const double* ra = (y > 0) ? rowsum.data() + static_cast<std::size_t>(y - 1) * w
                                       : nullptr;
            const double* rb = rowsum.data() + static_cast<std::size_t>(y) * w;
            const double* rc =
                (y < h - 1) ? rowsum.data() + static_cast<std::size_t>(y + 1) * w : nullptr;
            double* dst = out.data() + static_cast<std::size_t>(y) * w;
            const std::uint8_t* s = sink.data() + static_cast<std::size_t>(y) * w;
            if (ra && rc) {
                for (int x = 0; x < w; ++x)
                    dst[x] = s[x] ? 0.0 : (ra[x] + rb[x] + rc[x]) * scale;
            } else {
                const double* rd = ra ? ra : rc;
                for (int x = 0; x < w; ++x) dst[x] = s[x] ? 0.0 : (rd[x] + rb[x]) * scale;
            }
        }
    } else {
        for (int y = 0; y < h; ++y) {
            const int y0 = std::max(0, y - r);
            const int y1 = std::min(h - 1, y + r);
            double* dst = out.data() + static_cast<std::size_t>(y) * w;
            const std::uint8_t* s = sink.data() + static_cast<std::size_t>(y) * w;
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int yy = y0; yy <= y1; ++yy)
                    acc += rowsum[static_cast<std::size_t>(yy) * w + x];
                dst[x] = s[x] ? 0.0 : acc * scale;
            }
        }
    }
}

std::size_t OccupancyGrid::count_occupied() const {
    std::size_t n = 0;
    for (std::int32_t id : occupant_)
        if (id != kEmpty) ++n;
    return n;
}

void CountIntegral::build(const OccupancyGrid& occ) {
    width_ = occ.width();
    height_ = occ.height();
    sums_.assign(static_cast<std::size_t>(width_ + 1) * (height_ + 1), 0);
    const auto& cells = occ.cells();
    for (int y = 0; y < height_; ++y) {
        int rowacc = 0;
        const std::int32_t* src = cells.data() + static_cast<std::size_t>(y) * width_;
        const std::int32_t* above = sums_.data() + static_cast<std::size_t>(y) * (width_ + 1);
        std::int32_t* dst = sums_.data() + static_cast<std::size_t>(y + 1) * (width_ + 1);
        for (int x = 0; x < width_; ++x) {
            rowacc += (src[x] != OccupancyGrid::kEmpty) ? 1 : 0;
            dst[x + 1] = above[x + 1] + rowacc;
        }
    }
}

}  // namespace morph
