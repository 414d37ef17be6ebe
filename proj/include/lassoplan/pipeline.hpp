#pragma once

#include <functional>
#include <string>

#include "lassoplan/serialize.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// End-to-end stages shared by the CLI, the evaluation loop and the tests.

// harvest + fit + optional TE pruning + clustering + edges
Artifact build_artifact(const Maze& maze, const Dataset& dataset, const PipelineConfig& config,
                        std::uint64_t seed);

// task-specific planning context: automaton + augmented graph
struct TaskContext {
    AtomTable atoms;
    Nba nba;
    LatentGraph graph;  // augmented
};

TaskContext prepare_task(const Artifact& artifact, const TaskSpec& task);

// free-space start outside every region, uniform over free cells
Vec2 sample_start(const Maze& maze, const std::vector<Region>& regions, Rng& rng);

struct EpisodeResult {
    bool planned = false;
    bool success = false;
    double plan_time_s = 0.0;
    int traj_len = 0;
    std::string failure;  // empty on success
    Plan plan;
    ExecTrace trace;
};

enum class PlannerVariant { Joint, Decoupled };

// plan + execute + acceptance check for one initial state; planner errors
// are recorded, not thrown
EpisodeResult run_episode(const Artifact& artifact, const TaskContext& ctx, const TaskSpec& task,
                          const Vec2& s0, PlannerVariant variant, bool measure_time = true);

struct EvalSummary {
    int episodes = 0;
    int successes = 0;
    double sr_mean = 0.0;  // per-task success rates, percent
    double sr_std = 0.0;
    double time_mean = 0.0;
    double time_std = 0.0;
    double len_mean = 0.0;  // successful episodes
    double len_std = 0.0;
};

// evaluates every task from `episodes` starts; records appended in episode
// order. With timing disabled plan_time_s is written as zero so output files
// are byte-stable.
EvalSummary evaluate(const Artifact& artifact, const std::vector<TaskSpec>& tasks, int episodes,
                     PlannerVariant variant, bool timing, std::vector<EvalRecord>& records,
                     const std::function<void(const TaskSpec&, int, const EpisodeResult&)>&
                         per_episode = nullptr);

std::string format_summary(const EvalSummary& s);

}  // namespace lasso
