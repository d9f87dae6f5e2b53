#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "morph/preset_arenas.hpp"
#include "morph/scenario.hpp"

namespace {

int env_threads() {
    const char* raw = std::getenv("MORPHADAPT_THREADS");
    if (!raw) return 1;
    const int n = std::atoi(raw);
    return n > 1 ? n : 1;
}

std::string format_optional(const std::optional<double>& v) {
    if (!v) return "";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

void write_result_txt(const morph::RunResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "termination_reason: " << morph::termination_name(result.termination_reason) << '\n'
        << "steps: " << result.steps_executed << '\n'
        << "final_population: " << result.final_population << '\n'
        << "sources_connected: " << (result.sources_connected ? "true" : "false") << '\n'
        << "path_length: " << format_optional(result.path_length) << '\n'
        << "oracle_length: " << format_optional(result.oracle_length) << '\n'
        << "clearance: " << format_optional(result.clearance) << '\n'
        << "holes: " << result.holes << '\n';
    if (!out) throw std::runtime_error(path + ": write failed");
}

morph::ScenarioConfig make_config(const std::string& preset_name, const std::string& config_path) {
    if (!preset_name.empty()) return morph::preset(preset_name);
    return morph::load_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morphadapt - path planning by a shrinking particle blob"};
    app.require_subcommand(1);

    std::string preset_name, config_path, out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::int64_t> frames_every, metrics_every;

    CLI::App* cmd_run = app.add_subcommand("run", "execute a scenario");
    auto* run_preset = cmd_run->add_option("--preset", preset_name, "preset scenario name");
    auto* run_config = cmd_run->add_option("--config", config_path, "scenario config file");
    run_preset->excludes(run_config);
    cmd_run->add_option("--seed", seed_override, "seed override");
    cmd_run->add_option("--out", out_dir, "output directory");
    cmd_run->add_option("--frames-every", frames_every, "frame interval override (0 = off)");
    cmd_run->add_option("--metrics-every", metrics_every, "metrics interval override");

    CLI::App* cmd_list = app.add_subcommand("preset-list", "list preset scenarios");

    CLI::App* cmd_validate = app.add_subcommand("validate", "parse config and arena, no simulation");
    auto* val_preset = cmd_validate->add_option("--preset", preset_name, "preset scenario name");
    auto* val_config = cmd_validate->add_option("--config", config_path, "scenario config file");
    val_preset->excludes(val_config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (cmd_list->parsed()) {
            for (const auto& name : morph::preset_names()) std::printf("%s\n", name.c_str());
            return 0;
        }

        if (preset_name.empty() && config_path.empty())
            throw std::runtime_error("one of --preset or --config is required");

        if (cmd_validate->parsed()) {
            const morph::ScenarioConfig cfg = make_config(preset_name, config_path);
            morph::resolve_arena(cfg.arena_path);  // arena must load too
            return 0;
        }

        // run
        morph::ScenarioConfig cfg = make_config(preset_name, config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (metrics_every) cfg.metric_interval = *metrics_every;
        if (frames_every) cfg.frame_interval = *frames_every;
        cfg.sensory_threads = env_threads();
        cfg.validate();

        std::filesystem::create_directories(out_dir);
        const std::string frames_dir = out_dir + "/frames";
        const morph::RunResult result = morph::run(cfg, nullptr, frames_dir);

        morph::write_metrics_csv(result.metrics, out_dir + "/metrics.csv");
        write_result_txt(result, out_dir + "/result.txt");

        const bool ok = result.termination_reason == morph::Termination::Converged &&
                        result.sources_connected;
        return ok ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
