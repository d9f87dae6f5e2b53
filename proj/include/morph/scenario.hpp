#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "morph/agents.hpp"
#include "morph/analysis.hpp"
#include "morph/arena.hpp"
#include "morph/lattice.hpp"
#include "morph/population.hpp"
#include "morph/render.hpp"

namespace morph {

// Source removals can be scheduled at a fixed step, or fired when the run
// first reaches the convergence criterion (the presets replay the paper's
// remove-after-settling experiments this way; the config file grammar only
// expresses fixed steps).
enum class EventTrigger { AtStep, OnConvergence };

struct ScenarioEvent {
    EventTrigger trigger = EventTrigger::AtStep;
    std::int64_t step = 0;  // used by AtStep
    int source_id = 0;      // remove_source target
};

struct ConvergenceParams {
    std::int64_t window = 2000;
    double population_tolerance = 0.005;
    // A settled path band still circulates particles; measured window
    // similarity of steady bands sits near 0.9, so 0.95 would rarely fire.
    double occupancy_jaccard = 0.90;

    bool valid() const {
        return window >= 1 && population_tolerance > 0.0 && population_tolerance <= 1.0 &&
               occupancy_jaccard > 0.0 && occupancy_jaccard <= 1.0;
    }
};

struct ScenarioConfig {
    std::string arena_path;
    std::uint64_t seed = 1;

    AgentParams agent;
    GrowthShrinkParams growth;
    DiffusionParams diffusion;

    InitMode init_mode = InitMode::HabitableOnly;
    double init_density = 0.5;

    double source_strength = 6.375;
    double wall_repellent = 0.0;
    ObstacleMode obstacle_mode = ObstacleMode::Impassable;
    int exposure_window = 11;
    double exposed_strength = -6.375;
    double covered_strength = -0.006375;

    std::vector<ScenarioEvent> events;  // sorted by step for AtStep triggers

    std::int64_t max_steps = 500000;
    ConvergenceParams convergence;
    std::int64_t metric_interval = 100;
    std::int64_t frame_interval = 0;  // 0 = no frames

    int sensory_threads = 1;
    bool check_invariants = false;  // per-sample structural checks

    void validate() const;  // throws std::runtime_error on bad values
};

// Flat key = value config file; '#' starts a comment. Unknown keys are
// rejected.
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);
ScenarioConfig load_config(const std::string& path);

// One fully specified configuration per paper experiment.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

enum class Termination { Converged, MaxSteps, Extinct };
const char* termination_name(Termination t);

struct RunResult {
    Termination termination_reason = Termination::MaxSteps;
    std::int64_t steps_executed = 0;
    std::size_t final_population = 0;
    std::vector<RunMetrics> metrics;

    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> final_occupied;

    // Final-state analysis, also summarized in the CLI's result.txt.
    bool sources_connected = false;
    std::optional<double> path_length;
    std::optional<double> oracle_length;
    std::optional<double> clearance;
    int holes = 0;
};

// Fires when a window passes with both the relative population change within
// tolerance and the occupied-set Jaccard similarity at or above the threshold
// between the window endpoints.
class ConvergenceDetector {
public:
    explicit ConvergenceDetector(const ConvergenceParams& params) : params_(params) {}

    // Call once per step with the current occupied mask; returns true when
    // the window test passes at this step.
    bool update(std::int64_t step, std::size_t population,
                const std::vector<std::uint8_t>& occupied);
    void reset();

private:
    ConvergenceParams params_;
    bool have_mark_ = false;
    std::int64_t mark_step_ = 0;
    std::size_t mark_population_ = 0;
    std::vector<std::uint8_t> mark_occupied_;
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config);

    void step();  // applies due AtStep events, then one scheduler step

    const ScenarioConfig& config() const { return config_; }
    const Arena& arena() const { return arena_; }
    Arena& arena_mutable() { return arena_; }
    const ChemoLattice& lattice() const { return lattice_; }
    const Population& population() const { return pop_; }
    const OccupancyGrid& occupancy() const { return pop_.occupancy(); }
    std::int64_t step_counter() const { return pop_.step_counter(); }
    MetricsContext& metrics_context() { return metrics_; }

    // Convergence is evaluated after every executed step.
    bool converged_signal() const { return converged_signal_; }
    void reset_convergence();

    // Applies a remove_source event immediately and resets the detector.
    void apply_event(const ScenarioEvent& event);
    bool events_pending() const;
    // Removes and returns all pending on-convergence events.
    std::vector<ScenarioEvent> take_on_convergence_events();

    // Invoked whenever an event is applied (including AtStep events handled
    // inside step()).
    std::function<void(const ScenarioEvent&)> on_event_applied;

    RunMetrics sample_metrics();  // runs invariant checks when configured

private:
    void check_invariants(const RunMetrics& m) const;

    ScenarioConfig config_;
    Arena arena_;
    ChemoLattice lattice_;
    Population pop_;
    ExposureState exposure_;
    SchedulerParams sched_;
    MetricsContext metrics_;
    ConvergenceDetector detector_;
    bool converged_signal_ = false;
    std::vector<ScenarioEvent> pending_events_;
    std::vector<std::uint8_t> occupied_scratch_;
};

struct RunObserver {
    std::function<void(const RunMetrics&)> on_metrics;
    std::function<void(std::int64_t step, const ScenarioEvent&, Simulation&)> on_event;
};

// Full scenario execution: steps until convergence (with every scheduled
// event already applied) or max_steps, sampling metrics on the configured
// cadence and optionally writing frames into frames_dir.
RunResult run(const ScenarioConfig& config, RunObserver* observer = nullptr,
              const std::string& frames_dir = "");

}  // namespace morph
