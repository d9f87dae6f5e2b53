#pragma once

#include <string>
#include <vector>

#include "morph/arena.hpp"
#include "morph/pgm.hpp"

namespace morph {

// Built-in experiment arenas. A ScenarioConfig may reference them with the
// path scheme "preset:<name>"; the same images are exported as PGM files by
// the genarenas tool, and both routes produce identical arenas.
bool is_preset_arena_path(const std::string& path);
Image8 preset_arena_image(const std::string& name);
std::vector<std::string> preset_arena_names();

// Loads from a PGM file, or synthesizes when given a preset: path.
Arena resolve_arena(const std::string& arena_path);

}  // namespace morph
