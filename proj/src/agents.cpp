#include "morph/agents.hpp"

#include <cmath>

namespace morph {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void cos_sin_deg(double deg, double& c, double& s) {
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    const double octant = a / 45.0;
    if (octant == std::floor(octant)) {
        static const double kHalfSqrt2 = std::sqrt(0.5);
        switch (static_cast<int>(octant)) {
            case 0: c = 1.0; s = 0.0; return;
            case 1: c = kHalfSqrt2; s = kHalfSqrt2; return;
            case 2: c = 0.0; s = 1.0; return;
            case 3: c = -kHalfSqrt2; s = kHalfSqrt2; return;
            case 4: c = -1.0; s = 0.0; return;
            case 5: c = -kHalfSqrt2; s = -kHalfSqrt2; return;
            case 6: c = 0.0; s = -1.0; return;
            case 7: c = kHalfSqrt2; s = -kHalfSqrt2; return;
        }
    }
    c = std::cos(a * kPi / 180.0);
    s = std::sin(a * kPi / 180.0);
}

AgentKinematics AgentKinematics::from(const AgentParams& params) {
    AgentKinematics kin;
    cos_sin_deg(params.sensor_angle, kin.cos_sa, kin.sin_sa);
    cos_sin_deg(params.rotation_angle, kin.cos_ra, kin.sin_ra);
    return kin;
}

double orientation_deg(const Particle& p) {
    double deg = std::atan2(p.hy, p.hx) * 180.0 / kPi;
    if (deg < 0.0) deg += 360.0;
    if (deg >= 360.0) deg -= 360.0;
    return deg;
}

void set_orientation_deg(Particle& p, double deg) {
    double hx, hy;
    cos_sin_deg(deg, hx, hy);
    p.hx = static_cast<float>(hx);
    p.hy = static_cast<float>(hy);
}

void sense_and_orient(Particle& p, const ChemoLattice& lattice, const AgentParams& params,
                      const AgentKinematics& kin, Rng& rng) {
    const double so = params.sensor_offset;
    // FL sits at theta - SA, FR at theta + SA.
    const double lx = p.hx * kin.cos_sa + p.hy * kin.sin_sa;
    const double ly = p.hy * kin.cos_sa - p.hx * kin.sin_sa;
    const double rx = p.hx * kin.cos_sa - p.hy * kin.sin_sa;
    const double ry = p.hy * kin.cos_sa + p.hx * kin.sin_sa;

    const double f = lattice.sample(p.x + so * p.hx, p.y + so * p.hy);
    const double fl = lattice.sample(p.x + so * lx, p.y + so * ly);
    const double fr = lattice.sample(p.x + so * rx, p.y + so * ry);

    if (f > fl && f > fr) return;
    if (f < fl && f < fr) {
        if (rng.uniform_bool())
            rotate_heading(p, kin.cos_ra, kin.sin_ra);
        else
            rotate_heading(p, kin.cos_ra, -kin.sin_ra);
        return;
    }
    if (fl < fr) {
        rotate_heading(p, kin.cos_ra, kin.sin_ra);  // right: toward theta + RA
    } else if (fr < fl) {
        rotate_heading(p, kin.cos_ra, -kin.sin_ra);  // left: toward theta - RA
    }
}

bool attempt_move(Particle& p, std::int32_t id, OccupancyGrid& occ, ChemoLattice& lattice,
                  const std::vector<std::uint8_t>& enterable, const AgentParams& params,
                  Rng& rng) {
    // Floor the float that will be stored, not the double intermediate, so
    // the registered cell always matches floor(position) after rounding.
    const float nx = static_cast<float>(p.x + params.step_length * p.hx);
    const float ny = static_cast<float>(p.y + params.step_length * p.hy);
    const int ncx = floor_to_int(nx);
    const int ncy = floor_to_int(ny);

    const bool same_cell = (ncx == p.cx && ncy == p.cy);
    if (same_cell) {  // EXPERIMENT V14: sub-cell forward motion succeeds, deposits in place
        p.x = nx;
        p.y = ny;
        p.moved_last_step = true;
        lattice.deposit(Cell{ncx, ncy}, params.deposit_amount);
        return true;
    }
    const bool open = occ.in_bounds(ncx, ncy) && enterable[occ.index(ncx, ncy)];
    if (open && !occ.occupied(ncx, ncy)) {
        occ.clear(p.cx, p.cy);
        occ.place(ncx, ncy, id);
        p.x = nx;
        p.y = ny;
        p.cx = static_cast<std::int16_t>(ncx);
        p.cy = static_cast<std::int16_t>(ncy);
        p.moved_last_step = true;
        lattice.deposit(Cell{ncx, ncy}, params.deposit_amount);
        return true;
    }
    // Crowding blocks (another particle holds the cell) keep the sensed
    // heading, so jammed regions retain their directed pressure; the blob
    // disintegrates into a static sponge without that. Geometric blocks
    // (walls, lattice edge, a step that stays in the own cell) redraw the
    // heading uniformly, which keeps particles from wedging in place.
    if (!open) {
        double hx, hy;
        rng.unit_vector(hx, hy);
        p.hx = static_cast<float>(hx);
        p.hy = static_cast<float>(hy);
    }
    p.moved_last_step = false;
    return false;
}

}  // namespace morph
