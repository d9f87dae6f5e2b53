#pragma once

#include <cstdint>
#include <vector>

#include "morph/lattice.hpp"
#include "morph/rng.hpp"

namespace morph {

// Mobile agent. Heading is kept as a unit vector; the angle in degrees is
// derived on demand. floor(position) always equals the registered cell.
// 32-byte layout: positions and headings live in float (the field itself
// stays double); all arithmetic on them happens in double and rounds once on
// store, which is as deterministic as the all-double version.
struct Particle {
    float x = 0.0f;
    float y = 0.0f;
    float hx = 1.0f;
    float hy = 0.0f;
    std::int16_t cx = 0;
    std::int16_t cy = 0;
    bool moved_last_step = false;
};

struct AgentParams {
    double sensor_offset = 7.0;    // SO, pixels; >= 3 for blob coupling
    double sensor_angle = 90.0;    // SA, degrees
    double rotation_angle = 45.0;  // RA, degrees
    double step_length = 1.0;      // pixels per motor step
    double deposit_amount = 5.0;   // trail per successful move

    bool valid() const {
        return sensor_offset >= 3.0 && sensor_angle > 0.0 && sensor_angle <= 180.0 &&
               rotation_angle > 0.0 && rotation_angle <= 180.0 && step_length > 0.0;
    }
};

// cos/sin pairs for the sensor and rotation angles, resolved once per run.
// Angles that are multiples of 45 degrees use exact constants (the defaults
// are 90/45), keeping the hot loop free of libm so runs replay bit-identically
// across platforms.
struct AgentKinematics {
    double cos_sa = 0.0;
    double sin_sa = 1.0;
    double cos_ra = 0.0;
    double sin_ra = 1.0;

    static AgentKinematics from(const AgentParams& params);
};

// Exact cos/sin for multiples of 45 degrees, libm otherwise.
void cos_sin_deg(double deg, double& c, double& s);

// Angle of the heading vector in degrees, normalized to [0, 360). Screen
// convention: y grows downward, angles increase clockwise on screen.
double orientation_deg(const Particle& p);
void set_orientation_deg(Particle& p, double deg);

// Rotate the heading; positive angle = toward theta + angle ("right").
inline void rotate_heading(Particle& p, double cos_a, double sin_a) {
    const double hx = p.hx * cos_a - p.hy * sin_a;
    const double hy = p.hy * cos_a + p.hx * sin_a;
    p.hx = static_cast<float>(hx);
    p.hy = static_cast<float>(hy);
}

// Sensory stage: sample F/FL/FR at sensor_offset ahead, steer per the
// three-sensor rule. Draws from rng exactly once, and only when both side
// sensors beat the front one.
void sense_and_orient(Particle& p, const ChemoLattice& lattice, const AgentParams& params,
                      const AgentKinematics& kin, Rng& rng);

// Motor stage: try one step forward. On success the particle advances, claims
// the new cell and deposits trail there. A cell held by another particle
// blocks the move but keeps the heading (jammed mass keeps pressing along its
// sensed direction); walls, the lattice edge and same-cell steps block and
// redraw the heading uniformly. Returns true on a successful move.
bool attempt_move(Particle& p, std::int32_t id, OccupancyGrid& occ, ChemoLattice& lattice,
                  const std::vector<std::uint8_t>& enterable, const AgentParams& params, Rng& rng);

}  // namespace morph
