// Exports the built-in preset arenas as PGM files (the same images the
// preset: scheme synthesizes in memory).
#include <cstdio>
#include <filesystem>
#include <string>

#include "morph/pgm.hpp"
#include "morph/preset_arenas.hpp"

int main(int argc, char** argv) {
    std::string out_dir = "arenas";
    if (argc == 3 && std::string(argv[1]) == "--out") {
        out_dir = argv[2];
    } else if (argc != 1) {
        std::fprintf(stderr, "usage: %s [--out <dir>]\n", argv[0]);
        return 1;
    }
    try {
        std::filesystem::create_directories(out_dir);
        for (const auto& name : morph::preset_arena_names()) {
            const std::string path = out_dir + "/" + name + ".pgm";
            morph::write_pgm(morph::preset_arena_image(name), path);
            std::printf("wrote %s\n", path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
