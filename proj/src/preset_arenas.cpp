#include "morph/preset_arenas.hpp"

#include <stdexcept>

namespace morph {

namespace {

constexpr const char* kScheme = "preset:";

void draw_border(Image8& img, int thickness) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (x < thickness || y < thickness || x >= img.width - thickness ||
                y >= img.height - thickness)
                img.at(x, y) = kCodeWall;
}

void fill_rect(Image8& img, std::uint8_t code, int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) img.at(x, y) = code;
}

void fill_disc(Image8& img, std::uint8_t code, int cx, int cy, int r) {
    for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = code;
}

// 3x3 source block centered on (cx, cy).
void place_source(Image8& img, int cx, int cy) {
    fill_rect(img, kCodeSource, cx - 1, cy - 1, cx + 1, cy + 1);
}

Image8 fig1_simple() {
    Image8 img(200, 200, kCodeHabitable);
    draw_border(img, 3);
    place_source(img, 35, 100);
    place_source(img, 165, 100);
    return img;
}

// Four sources on a shallow diagonal; the stagger makes the row-major
// discovery order match the left-to-right numbering 1..4. Kept compact so
// the settled network's spans stay short enough not to tear.
Image8 fig2_multisource() {
    Image8 img(196, 140, kCodeHabitable);
    draw_border(img, 3);
    place_source(img, 32, 58);
    place_source(img, 76, 66);
    place_source(img, 120, 74);
    place_source(img, 164, 82);
    return img;
}

// A wall slab hangs from the top edge between the sources, so the shortest
// path must round its tip close to the wall unless the repellent pushes the
// blob off.
Image8 fig5_collision_free() {
    Image8 img(190, 170, kCodeHabitable);
    draw_border(img, 3);
    fill_rect(img, kCodeWall, 92, 3, 98, 115);
    place_source(img, 35, 145);
    place_source(img, 155, 145);
    return img;
}

Image8 fig6_obstacles() {
    Image8 img(170, 130, kCodeHabitable);
    draw_border(img, 3);
    fill_rect(img, kCodeObstacle, 55, 52, 66, 63);
    fill_rect(img, kCodeObstacle, 80, 66, 91, 77);
    fill_rect(img, kCodeObstacle, 105, 52, 116, 63);
    place_source(img, 22, 65);
    place_source(img, 148, 65);
    return img;
}

Image8 fig7_exposure() {
    Image8 img(170, 130, kCodeHabitable);
    draw_border(img, 3);
    fill_rect(img, kCodeObstacle, 52, 50, 61, 59);
    fill_rect(img, kCodeObstacle, 78, 64, 95, 81);
    fill_rect(img, kCodeObstacle, 112, 48, 123, 59);
    place_source(img, 22, 65);
    place_source(img, 148, 65);
    return img;
}

Image8 fig8_obstacle_field() {
    Image8 img(256, 256, kCodeHabitable);
    draw_border(img, 3);
    const int cols[4] = {70, 105, 140, 175};
    const int rows[5] = {64, 96, 128, 160, 192};
    for (int r = 0; r < 5; ++r) {
        const int shift = (r & 1) ? 17 : 0;
        for (int c = 0; c < 4; ++c) fill_disc(img, kCodeObstacle, cols[c] + shift, rows[r], 4);
    }
    place_source(img, 25, 128);
    place_source(img, 230, 128);
    return img;
}

}  // namespace

bool is_preset_arena_path(const std::string& path) { return path.rfind(kScheme, 0) == 0; }

std::vector<std::string> preset_arena_names() {
    return {"fig1_simple",  "fig2_multisource", "fig5_collision_free",
            "fig6_obstacles", "fig7_exposure",  "fig8_obstacle_field"};
}

Image8 preset_arena_image(const std::string& name) {
    if (name == "fig1_simple") return fig1_simple();
    if (name == "fig2_multisource") return fig2_multisource();
    if (name == "fig5_collision_free") return fig5_collision_free();
    if (name == "fig6_obstacles") return fig6_obstacles();
    if (name == "fig7_exposure") return fig7_exposure();
    if (name == "fig8_obstacle_field") return fig8_obstacle_field();
    throw std::runtime_error("unknown preset arena '" + name + "'");
}

Arena resolve_arena(const std::string& arena_path) {
    if (is_preset_arena_path(arena_path)) {
        const std::string name = arena_path.substr(std::string(kScheme).size());
        return Arena::from_image(preset_arena_image(name), arena_path);
    }
    return Arena::load(arena_path);
}

}  // namespace morph
