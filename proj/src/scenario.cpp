#include "morph/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "morph/preset_arenas.hpp"

namespace morph {

namespace {

[[noreturn]] void config_error(const std::string& origin, const std::string& what) {
    throw std::runtime_error(origin + ": " + what);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& origin, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        config_error(origin, "bad numeric value '" + v + "' for key " + key);
    }
}

std::int64_t parse_int(const std::string& v, const std::string& origin, const std::string& key) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        config_error(origin, "bad integer value '" + v + "' for key " + key);
    return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& origin, const std::string& key) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        config_error(origin, "bad unsigned value '" + v + "' for key " + key);
    return out;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (arena_path.empty()) throw std::runtime_error("config: arena path missing");
    if (!agent.valid()) throw std::runtime_error("config: agent parameters out of range");
    if (!growth.valid()) throw std::runtime_error("config: growth/shrink parameters out of range");
    if (!diffusion.valid()) throw std::runtime_error("config: diffusion parameters out of range");
    if (!(init_density > 0.0 && init_density <= 1.0))
        throw std::runtime_error("config: init_density must be in (0, 1]");
    if (max_steps < 1) throw std::runtime_error("config: max_steps must be >= 1");
    if (!convergence.valid()) throw std::runtime_error("config: convergence parameters invalid");
    if (metric_interval < 1) throw std::runtime_error("config: metric_interval must be >= 1");
    if (frame_interval < 0) throw std::runtime_error("config: frame_interval must be >= 0");
    if (exposure_window < 1 || (exposure_window & 1) == 0)
        throw std::runtime_error("config: exposure_window must be odd and >= 1");
    if (exposed_strength > 0.0 || covered_strength > 0.0)
        throw std::runtime_error("config: obstacle repellent strengths must be <= 0");
    std::int64_t prev = 0;
    for (const ScenarioEvent& e : events) {
        if (e.trigger == EventTrigger::AtStep) {
            if (e.step < prev) throw std::runtime_error("config: events not sorted by step");
            prev = e.step;
        }
    }
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_arena = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) config_error(where, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) config_error(where, "expected key = value");

        if (key == "arena") {
            cfg.arena_path = value;
            saw_arena = true;
        } else if (key == "seed") {
            cfg.seed = parse_u64(value, where, key);
        } else if (key == "so") {
            cfg.agent.sensor_offset = parse_double(value, where, key);
        } else if (key == "sa") {
            cfg.agent.sensor_angle = parse_double(value, where, key);
        } else if (key == "ra") {
            cfg.agent.rotation_angle = parse_double(value, where, key);
        } else if (key == "step_length") {
            cfg.agent.step_length = parse_double(value, where, key);
        } else if (key == "deposit") {
            cfg.agent.deposit_amount = parse_double(value, where, key);
        } else if (key == "damping") {
            cfg.diffusion.damping = parse_double(value, where, key);
        } else if (key == "kernel") {
            cfg.diffusion.kernel_size = static_cast<int>(parse_int(value, where, key));
        } else if (key == "census_window") {
            cfg.growth.census_window = static_cast<int>(parse_int(value, where, key));
        } else if (key == "growth_min") {
            cfg.growth.growth_min = static_cast<int>(parse_int(value, where, key));
        } else if (key == "growth_max") {
            cfg.growth.growth_max = static_cast<int>(parse_int(value, where, key));
        } else if (key == "survival_max") {
            cfg.growth.survival_max = static_cast<int>(parse_int(value, where, key));
        } else if (key == "division_interval") {
            cfg.growth.division_interval = static_cast<int>(parse_int(value, where, key));
        } else if (key == "removal_interval") {
            cfg.growth.removal_interval = static_cast<int>(parse_int(value, where, key));
        } else if (key == "exposure_window") {
            cfg.exposure_window = static_cast<int>(parse_int(value, where, key));
        } else if (key == "source_strength") {
            cfg.source_strength = parse_double(value, where, key);
        } else if (key == "wall_repellent") {
            cfg.wall_repellent = parse_double(value, where, key);
        } else if (key == "obstacle_mode") {
            if (value == "impassable") cfg.obstacle_mode = ObstacleMode::Impassable;
            else if (value == "exposure") cfg.obstacle_mode = ObstacleMode::Exposure;
            else config_error(where, "obstacle_mode must be impassable or exposure");
        } else if (key == "exposed_strength") {
            cfg.exposed_strength = parse_double(value, where, key);
        } else if (key == "covered_strength") {
            cfg.covered_strength = parse_double(value, where, key);
        } else if (key == "init_mode") {
            if (value == "habitable-only") cfg.init_mode = InitMode::HabitableOnly;
            else if (value == "full-cover") cfg.init_mode = InitMode::FullCover;
            else config_error(where, "init_mode must be habitable-only or full-cover");
        } else if (key == "init_density") {
            cfg.init_density = parse_double(value, where, key);
        } else if (key == "max_steps") {
            cfg.max_steps = parse_int(value, where, key);
        } else if (key == "convergence_window") {
            cfg.convergence.window = parse_int(value, where, key);
        } else if (key == "population_tolerance") {
            cfg.convergence.population_tolerance = parse_double(value, where, key);
        } else if (key == "occupancy_jaccard") {
            cfg.convergence.occupancy_jaccard = parse_double(value, where, key);
        } else if (key == "metric_interval") {
            cfg.metric_interval = parse_int(value, where, key);
        } else if (key == "frame_interval") {
            cfg.frame_interval = parse_int(value, where, key);
        } else if (key == "event") {
            // event = <step> remove_source <id>
            std::istringstream ev(value);
            std::int64_t step = 0;
            std::string action;
            int id = 0;
            if (!(ev >> step >> action >> id) || action != "remove_source" || !(ev >> std::ws).eof())
                config_error(where, "event must be '<step> remove_source <id>'");
            if (step < 0) config_error(where, "event step must be >= 0");
            cfg.events.push_back(ScenarioEvent{EventTrigger::AtStep, step, id});
        } else {
            config_error(where, "unknown key '" + key + "'");
        }
    }
    if (!saw_arena) config_error(origin, "missing required key 'arena'");
    std::stable_sort(cfg.events.begin(), cfg.events.end(),
                     [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.step < b.step; });
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::vector<std::string> preset_names() {
    return {"fig1_simple",    "fig2_multisource",    "fig3_removal_23",
            "fig4_removal_24", "fig5_collision_free", "fig6_obstacles_multi",
            "fig7_exposure",   "fig8_obstacle_field"};
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig cfg;
    // A hair below one particle per cell renders as a completely filled
    // arena but spares the opening survival passes the uniform-packing shock
    // that sprays fragments; fig1 keeps the exact full fill.
    cfg.init_density = 0.97;
    cfg.metric_interval = 100;

    if (name == "fig1_simple") {
        cfg.arena_path = "preset:fig1_simple";
        cfg.init_density = 1.0;
    } else if (name == "fig2_multisource") {
        cfg.arena_path = "preset:fig2_multisource";
    } else if (name == "fig3_removal_23") {
        cfg.arena_path = "preset:fig2_multisource";
        cfg.events.push_back({EventTrigger::OnConvergence, 0, 2});
        cfg.events.push_back({EventTrigger::OnConvergence, 0, 3});
    } else if (name == "fig4_removal_24") {
        cfg.arena_path = "preset:fig2_multisource";
        cfg.events.push_back({EventTrigger::OnConvergence, 0, 2});
        cfg.events.push_back({EventTrigger::OnConvergence, 0, 4});
    } else if (name == "fig5_collision_free") {
        cfg.arena_path = "preset:fig5_collision_free";
        cfg.wall_repellent = -6.375;
    } else if (name == "fig6_obstacles_multi") {
        cfg.arena_path = "preset:fig6_obstacles";
        cfg.obstacle_mode = ObstacleMode::Impassable;
    } else if (name == "fig7_exposure") {
        cfg.arena_path = "preset:fig7_exposure";
        cfg.obstacle_mode = ObstacleMode::Exposure;
        cfg.init_mode = InitMode::FullCover;
        cfg.growth.removal_interval = 3;  // slower shrinkage for exposure runs
    } else if (name == "fig8_obstacle_field") {
        cfg.arena_path = "preset:fig8_obstacle_field";
        cfg.obstacle_mode = ObstacleMode::Exposure;
        cfg.init_mode = InitMode::FullCover;
        cfg.growth.removal_interval = 3;
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw std::runtime_error("unknown preset '" + name + "' (valid: " + known + ")");
    }
    cfg.validate();
    return cfg;
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Converged: return "converged";
        case Termination::MaxSteps: return "max_steps";
        case Termination::Extinct: return "extinct";
    }
    return "unknown";
}

bool ConvergenceDetector::update(std::int64_t step, std::size_t population,
                                 const std::vector<std::uint8_t>& occupied) {
    if (!have_mark_) {
        have_mark_ = true;
        mark_step_ = step;
        mark_population_ = population;
        mark_occupied_ = occupied;
        return false;
    }
    if (step - mark_step_ < params_.window) return false;

    bool pass = false;
    if (mark_population_ > 0) {
        const double change = std::fabs(static_cast<double>(population) -
                                        static_cast<double>(mark_population_)) /
                              static_cast<double>(mark_population_);
        if (change <= params_.population_tolerance) {
            std::size_t inter = 0, uni = 0;
            for (std::size_t i = 0; i < occupied.size(); ++i) {
                const bool a = occupied[i] != 0;
                const bool b = mark_occupied_[i] != 0;
                inter += (a && b) ? 1 : 0;
                uni += (a || b) ? 1 : 0;
            }
            const double jaccard = (uni == 0) ? 1.0 : static_cast<double>(inter) / uni;
            pass = jaccard >= params_.occupancy_jaccard;
        }
    }
    mark_step_ = step;
    mark_population_ = population;
    mark_occupied_ = occupied;
    return pass;
}

void ConvergenceDetector::reset() { have_mark_ = false; }

Simulation::Simulation(const ScenarioConfig& config)
    : config_(config),
      arena_([&config] {
          config.validate();
          Arena a = resolve_arena(config.arena_path);
          a.wall_repellent_strength = config.wall_repellent;
          a.obstacle_mode = config.obstacle_mode;
          a.exposure_window = config.exposure_window;
          a.exposed_strength = config.exposed_strength;
          a.covered_strength = config.covered_strength;
          for (Source& s : a.sources()) s.strength = config.source_strength;
          a.finalize();
          return a;
      }()),
      lattice_(arena_.width(), arena_.height()),
      pop_(Population::initialize(arena_, config.init_density, config.init_mode, config.seed)),
      metrics_(arena_),
      detector_(config.convergence) {
    arena_.apply_sinks(lattice_);
    sched_.agent = config_.agent;
    sched_.growth = config_.growth;
    sched_.diffusion = config_.diffusion;
    sched_.sensory_threads = config_.sensory_threads;
    for (const ScenarioEvent& e : config_.events) {
        if (arena_.find_source(e.source_id) == nullptr)
            throw std::runtime_error("event references unknown source id " +
                                     std::to_string(e.source_id));
        pending_events_.push_back(e);
    }
}

void Simulation::apply_event(const ScenarioEvent& event) {
    arena_.remove_source(event.source_id);
    detector_.reset();
    converged_signal_ = false;
    for (auto it = pending_events_.begin(); it != pending_events_.end(); ++it) {
        if (it->trigger == event.trigger && it->source_id == event.source_id &&
            it->step == event.step) {
            pending_events_.erase(it);
            break;
        }
    }
    if (on_event_applied) on_event_applied(event);
}

bool Simulation::events_pending() const { return !pending_events_.empty(); }

std::vector<ScenarioEvent> Simulation::take_on_convergence_events() {
    std::vector<ScenarioEvent> fire;
    for (std::size_t i = 0; i < pending_events_.size();) {
        if (pending_events_[i].trigger == EventTrigger::OnConvergence) {
            fire.push_back(pending_events_[i]);
            pending_events_.erase(pending_events_.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return fire;
}

void Simulation::reset_convergence() {
    detector_.reset();
    converged_signal_ = false;
}

void Simulation::step() {
    const std::int64_t s = pop_.step_counter();
    // AtStep events land before this step's projection pass.
    for (std::size_t i = 0; i < pending_events_.size();) {
        if (pending_events_[i].trigger == EventTrigger::AtStep && pending_events_[i].step == s)
            apply_event(pending_events_[i]);
        else
            ++i;
    }
    pop_.scheduler_step(arena_, exposure_, lattice_, sched_);

    occupied_scratch_.resize(pop_.occupancy().cells().size());
    const auto& cells = pop_.occupancy().cells();
    for (std::size_t i = 0; i < cells.size(); ++i)
        occupied_scratch_[i] = cells[i] != OccupancyGrid::kEmpty ? 1 : 0;
    converged_signal_ =
        detector_.update(pop_.step_counter(), pop_.size(), occupied_scratch_);
}

RunMetrics Simulation::sample_metrics() {
    RunMetrics m = metrics_.compute(pop_.step_counter(), pop_.occupancy());
    if (config_.check_invariants) check_invariants(m);
    return m;
}

void Simulation::check_invariants(const RunMetrics& m) const {
    if (!pop_.consistent())
        throw std::logic_error("invariant violation: occupancy bookkeeping inconsistent");
    for (int y = 0; y < lattice_.height(); ++y)
        for (int x = 0; x < lattice_.width(); ++x)
            if (lattice_.is_sink(x, y) && lattice_.value_at(x, y) != 0.0)
                throw std::logic_error("invariant violation: nonzero sink cell");
    if (m.occupied_path_length) {
        // The occupied graph is a subgraph of the enterable graph.
        auto& ctx = const_cast<MetricsContext&>(metrics_);
        const auto oracle = ctx.oracle_length();
        if (oracle && *m.occupied_path_length < *oracle - 1e-9)
            throw std::logic_error("invariant violation: occupied path shorter than oracle");
    }
}

RunResult run(const ScenarioConfig& config, RunObserver* observer,
              const std::string& frames_dir) {
    Simulation sim(config);
    if (observer && observer->on_event)
        sim.on_event_applied = [&](const ScenarioEvent& e) {
            observer->on_event(sim.step_counter(), e, sim);
        };

    const bool frames = config.frame_interval > 0 && !frames_dir.empty();
    if (frames) std::filesystem::create_directories(frames_dir);

    RunResult result;
    result.width = sim.arena().width();
    result.height = sim.arena().height();

    Termination reason = Termination::MaxSteps;
    for (;;) {
        const std::int64_t s = sim.step_counter();
        if (s % config.metric_interval == 0) {
            RunMetrics m = sim.sample_metrics();
            result.metrics.push_back(m);
            if (observer && observer->on_metrics) observer->on_metrics(m);
        }
        if (frames && s % config.frame_interval == 0) {
            RenderParams rp;
            const Image8 img = render_frame(sim.lattice(), sim.occupancy(), sim.arena(), rp);
            write_pgm(img, frames_dir + "/" + frame_filename(s));
        }

        if (sim.population().size() == 0) {
            reason = Termination::Extinct;
            break;
        }
        if (sim.converged_signal()) {
            // A settled state first fires any remove-on-convergence events and
            // keeps running; termination waits until no event is pending.
            const auto fire = sim.take_on_convergence_events();
            if (!fire.empty()) {
                for (const ScenarioEvent& e : fire) sim.apply_event(e);
            } else if (!sim.events_pending()) {
                reason = Termination::Converged;
                break;
            }
        }
        if (s >= config.max_steps) {
            reason = Termination::MaxSteps;
            break;
        }
        sim.step();
    }

    result.termination_reason = reason;
    result.steps_executed = sim.step_counter();
    result.final_population = sim.population().size();

    const auto& cells = sim.occupancy().cells();
    result.final_occupied.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        result.final_occupied[i] = cells[i] != OccupancyGrid::kEmpty ? 1 : 0;

    const RunMetrics final_m = sim.metrics_context().compute(sim.step_counter(), sim.occupancy());
    result.sources_connected = final_m.sources_connected;
    result.path_length = final_m.occupied_path_length;
    result.oracle_length = sim.metrics_context().oracle_length();
    result.clearance = final_m.min_wall_clearance;
    result.holes = final_m.hole_count;
    return result;
}

}  // namespace morph
