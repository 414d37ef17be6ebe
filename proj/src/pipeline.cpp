#include "lassoplan/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace lasso {

Artifact build_artifact(const Maze& maze, const Dataset& dataset, const PipelineConfig& config,
                        std::uint64_t seed) {
    if (dataset.empty()) throw std::invalid_argument("build: dataset is empty");
    HarvestParams hp;
    hp.delta_max = config.effective_delta_max();
    const DistanceSamples samples = harvest(dataset, maze, hp);

    Artifact a;
    a.maze = maze;
    a.config = config;
    a.embedding = fit(samples, config.d_latent, config.n_landmarks, seed);

    const std::vector<char> keep =
        config.te_tau > 0.0 ? te_prune(dataset, a.embedding, config.te_tau, config.te_h)
                            : std::vector<char>(static_cast<std::size_t>(a.embedding.num_states()), 1);
    std::vector<int> retained;
    for (int i = 0; i < a.embedding.num_states(); ++i)
        if (keep[static_cast<std::size_t>(i)]) retained.push_back(i);

    a.graph = cluster(retained, a.embedding, config.h_td);
    EdgeParams ep;
    ep.support_filter = config.support_filter;
    build_edges(a.graph, dataset, ep);
    return a;
}

TaskContext prepare_task(const Artifact& artifact, const TaskSpec& task) {
    TaskContext ctx;
    ctx.nba = task_automaton(task, ctx.atoms);
    AugmentParams ap;
    ap.anchors_per_label = artifact.config.n_anchors;
    ap.retrieve_from_dataset = artifact.config.retrieve_anchors;
    ap.proximity_weighting = artifact.config.proximity_weighting;
    ap.seed = task.seed;
    ctx.graph = make_anchors(artifact.graph, artifact.maze, artifact.embedding, task.regions,
                             static_cast<int>(task.label_names.size()), ap);
    return ctx;
}

Vec2 sample_start(const Maze& maze, const std::vector<Region>& regions, Rng& rng) {
    const auto cells = maze.free_cells();
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const auto cell = cells[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(cells.size()) - 1))];
        const double m = 0.15 * maze.cell_size;
        const Vec2 p{cell.first * maze.cell_size + rng.uniform(m, maze.cell_size - m),
                     cell.second * maze.cell_size + rng.uniform(m, maze.cell_size - m)};
        if (labels_at(regions, p).empty()) return p;
    }
    throw GenerationExhaustedError("no region-free start state found");
}

EpisodeResult run_episode(const Artifact& artifact, const TaskContext& ctx, const TaskSpec& task,
                          const Vec2& s0, PlannerVariant variant, bool measure_time) {
    EpisodeResult r;
    PlanParams pp;
    pp.lambda = artifact.config.lambda;
    pp.top_k = artifact.config.top_k;
    pp.tau_soft = artifact.config.tau_soft;

    const int v0 = ctx.graph.nearest_node(artifact.embedding.embed(s0));
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.plan = variant == PlannerVariant::Joint
                     ? synthesize(ctx.graph, ctx.nba, v0, pp)
                     : decoupled_synthesize(ctx.graph, ctx.nba, v0, pp);
        r.planned = true;
    } catch (const InfeasibleError& err) {
        r.failure = err.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    if (measure_time) r.plan_time_s = std::chrono::duration<double>(t1 - t0).count();
    if (!r.planned) return r;

    ExecConfig ec;
    ec.h_td = artifact.config.h_td;
    ec.eps_anc = artifact.config.effective_eps_anc();
    ec.max_steps = artifact.config.max_steps;
    ec.suffix_laps = artifact.config.suffix_laps;
    r.trace = track(artifact.maze, task.regions, ctx.graph, artifact.embedding, r.plan, s0, ec);
    r.traj_len = r.trace.length();
    r.success = check_success(r.trace, ctx.nba, r.plan);
    if (!r.success && r.failure.empty()) {
        switch (r.trace.outcome) {
            case ExecOutcome::Success: r.failure = "trace word rejected"; break;
            case ExecOutcome::BudgetExhausted: r.failure = "step budget exhausted"; break;
            case ExecOutcome::Stuck: r.failure = "no tracking progress"; break;
        }
    }
    return r;
}

namespace {

struct RunningStats {
    int n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    void add(double v) {
        ++n;
        sum += v;
        sum_sq += v * v;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double stdev() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, sum_sq / n - m * m));
    }
};

}  // namespace

EvalSummary evaluate(const Artifact& artifact, const std::vector<TaskSpec>& tasks, int episodes,
                     PlannerVariant variant, bool timing, std::vector<EvalRecord>& records,
                     const std::function<void(const TaskSpec&, int, const EpisodeResult&)>&
                         per_episode) {
    EvalSummary summary;
    RunningStats sr, times, lens;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const TaskSpec& task = tasks[ti];
        TaskContext ctx = prepare_task(artifact, task);
        int task_successes = 0;
        for (int ep = 0; ep < episodes; ++ep) {
            Rng rng(task.seed * 1000003 + static_cast<std::uint64_t>(ep) * 17 + 5);
            const Vec2 s0 = sample_start(artifact.maze, task.regions, rng);
            EpisodeResult res = run_episode(artifact, ctx, task, s0, variant, timing);
            ++summary.episodes;
            if (res.success) {
                ++summary.successes;
                ++task_successes;
                lens.add(res.traj_len);
            }
            times.add(res.plan_time_s);
            EvalRecord rec;
            rec.task_id = "t" + std::to_string(ti);
            rec.episode = ep;
            rec.variant = variant == PlannerVariant::Joint ? "joint" : "decoupled";
            rec.success = res.success;
            rec.plan_time_s = timing ? res.plan_time_s : 0.0;
            rec.traj_len = res.traj_len;
            records.push_back(rec);
            if (per_episode) per_episode(task, ep, res);
        }
        sr.add(100.0 * task_successes / episodes);
    }
    summary.sr_mean = sr.mean();
    summary.sr_std = sr.stdev();
    summary.time_mean = times.mean();
    summary.time_std = times.stdev();
    summary.len_mean = lens.mean();
    summary.len_std = lens.stdev();
    return summary;
}

std::string format_summary(const EvalSummary& s) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "SR(%%) %.1f +- %.1f | Time(s) %.3f +- %.3f | Len %.1f +- %.1f | %d/%d episodes",
                  s.sr_mean, s.sr_std, s.time_mean, s.time_std, s.len_mean, s.len_std,
                  s.successes, s.episodes);
    return buf;
}

}  // namespace lasso
