#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "lassoplan/pipeline.hpp"
#include "lassoplan/render.hpp"

using namespace lasso;

namespace {

MazePreset preset_from_name(const std::string& s) {
    if (s == "medium") return MazePreset::Medium;
    if (s == "large") return MazePreset::Large;
    if (s == "giant") return MazePreset::Giant;
    throw CLI::ValidationError("--preset", "expected medium|large|giant");
}

DataRegime regime_from_name(const std::string& s) {
    if (s == "navigate") return DataRegime::Navigate;
    if (s == "stitch") return DataRegime::Stitch;
    if (s == "explore") return DataRegime::Explore;
    throw CLI::ValidationError("--regime", "expected navigate|stitch|explore");
}

Difficulty difficulty_from_flag(const std::string& s) {
    if (s == "simple") return Difficulty::Simple;
    if (s == "medium") return Difficulty::Medium;
    if (s == "hard") return Difficulty::Hard;
    throw CLI::ValidationError("--difficulty", "expected simple|medium|hard");
}

// config file first, then explicit flags override
struct ConfigFlags {
    std::string config_file;
    double htd = -1.0, tau_soft = -1.0, lambda = -1.0;
    int topk = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "flat key=value config file");
        cmd->add_option("--htd", htd, "temporal-distance horizon");
        cmd->add_option("--tau-soft", tau_soft, "soft-label safety threshold");
        cmd->add_option("--lambda", lambda, "prefix/suffix cost weight");
        cmd->add_option("--topk", topk, "prefix candidates kept");
    }

    PipelineConfig resolve(PipelineConfig base = {}) const {
        if (!config_file.empty()) base = parse_config_text(read_file(config_file), base);
        if (htd > 0) base.h_td = htd;
        if (tau_soft >= 0) base.tau_soft = tau_soft;
        if (lambda >= 0) base.lambda = lambda;
        if (topk > 0) base.top_k = topk;
        return base;
    }
};

Vec2 resolve_start(const Artifact& artifact, const TaskSpec& task, const std::string& start_flag,
                   int episode) {
    if (!start_flag.empty()) {
        const auto comma = start_flag.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--start", "expected `x,y`");
        return {std::stod(start_flag.substr(0, comma)), std::stod(start_flag.substr(comma + 1))};
    }
    Rng rng(task.seed * 1000003 + static_cast<std::uint64_t>(episode) * 17 + 5);
    return sample_start(artifact.maze, task.regions, rng);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"offline temporal-logic planning toolkit"};
    app.require_subcommand(1);

    // gen-maze
    auto* gen_maze_cmd = app.add_subcommand("gen-maze", "generate a maze preset");
    std::string gm_preset = "medium", gm_out = "maze.txt";
    std::uint64_t gm_seed = 0;
    gen_maze_cmd->add_option("--preset", gm_preset, "medium|large|giant");
    gen_maze_cmd->add_option("--seed", gm_seed, "rng seed");
    gen_maze_cmd->add_option("--out", gm_out, "output maze file")->required();

    // gen-dataset
    auto* gen_data_cmd = app.add_subcommand("gen-dataset", "generate trajectory fragments");
    std::string gd_maze, gd_regime = "stitch", gd_out;
    std::uint64_t gd_seed = 0;
    DatasetParams gd_params;
    gen_data_cmd->add_option("--maze", gd_maze, "maze file")->required();
    gen_data_cmd->add_option("--regime", gd_regime, "navigate|stitch|explore");
    gen_data_cmd->add_option("--seed", gd_seed, "rng seed");
    gen_data_cmd->add_option("--rollouts", gd_params.rollouts, "rollout count");
    gen_data_cmd->add_option("--max-len", gd_params.max_len, "max transitions per rollout");
    gen_data_cmd->add_option("--frag-len", gd_params.frag_len, "stitch fragment length");
    gen_data_cmd->add_option("--noise", gd_params.noise, "action jitter fraction");
    gen_data_cmd->add_option("--out", gd_out, "output JSONL file")->required();

    // build
    auto* build_cmd = app.add_subcommand("build", "build the embedding + latent graph artifact");
    std::string b_maze, b_dataset, b_out;
    std::uint64_t b_seed = 0;
    int b_landmarks = -1, b_dlatent = -1;
    bool b_no_support = false;
    ConfigFlags b_flags;
    build_cmd->add_option("--maze", b_maze, "maze file")->required();
    build_cmd->add_option("--dataset", b_dataset, "dataset JSONL")->required();
    build_cmd->add_option("--seed", b_seed, "rng seed (landmark selection)");
    build_cmd->add_option("--landmarks", b_landmarks, "landmark count");
    build_cmd->add_option("--dlatent", b_dlatent, "latent dimension");
    build_cmd->add_flag("--no-support-filter", b_no_support, "keep distance-only edges");
    b_flags.attach(build_cmd);
    build_cmd->add_option("--out", b_out, "output artifact JSON")->required();

    // gen-tasks
    auto* gen_tasks_cmd = app.add_subcommand("gen-tasks", "generate benchmark tasks");
    std::string gt_maze, gt_difficulty = "simple", gt_out;
    std::uint64_t gt_seed = 0;
    int gt_count = 10;
    gen_tasks_cmd->add_option("--maze", gt_maze, "maze file")->required();
    gen_tasks_cmd->add_option("--difficulty", gt_difficulty, "simple|medium|hard");
    gen_tasks_cmd->add_option("--count", gt_count, "number of tasks");
    gen_tasks_cmd->add_option("--seed", gt_seed, "rng seed");
    gen_tasks_cmd->add_option("--out", gt_out, "output JSONL file")->required();

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "synthesize a prefix-suffix plan");
    std::string p_artifact, p_tasks, p_start, p_variant = "joint", p_out;
    int p_index = 0;
    ConfigFlags p_flags;
    plan_cmd->add_option("--artifact", p_artifact, "artifact JSON")->required();
    plan_cmd->add_option("--tasks", p_tasks, "tasks JSONL")->required();
    plan_cmd->add_option("--index", p_index, "task index");
    plan_cmd->add_option("--start", p_start, "start position `x,y`");
    plan_cmd->add_option("--variant", p_variant, "joint|decoupled");
    p_flags.attach(plan_cmd);
    plan_cmd->add_option("--out", p_out, "output plan JSON")->required();

    // exec
    auto* exec_cmd = app.add_subcommand("exec", "execute a plan in the maze");
    std::string e_artifact, e_tasks, e_plan, e_start, e_out;
    int e_index = 0;
    exec_cmd->add_option("--artifact", e_artifact, "artifact JSON")->required();
    exec_cmd->add_option("--tasks", e_tasks, "tasks JSONL")->required();
    exec_cmd->add_option("--index", e_index, "task index");
    exec_cmd->add_option("--plan", e_plan, "plan JSON")->required();
    exec_cmd->add_option("--start", e_start, "start position `x,y`");
    exec_cmd->add_option("--out", e_out, "output trace JSONL")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "batch planning + execution metrics");
    std::string v_artifact, v_tasks, v_variant = "joint", v_timing = "on", v_out;
    int v_episodes = 5;
    ConfigFlags v_flags;
    eval_cmd->add_option("--artifact", v_artifact, "artifact JSON")->required();
    eval_cmd->add_option("--tasks", v_tasks, "tasks JSONL")->required();
    eval_cmd->add_option("--episodes", v_episodes, "episodes per task");
    eval_cmd->add_option("--variant", v_variant, "joint|decoupled");
    eval_cmd->add_option("--timing", v_timing, "on|off (off: zeroed for byte-stable output)");
    v_flags.attach(eval_cmd);
    eval_cmd->add_option("--out", v_out, "output CSV")->required();

    // render
    auto* render_cmd = app.add_subcommand("render", "render a task + plan + trace figure");
    std::string r_artifact, r_tasks, r_plan, r_trace, r_out;
    int r_index = 0;
    render_cmd->add_option("--artifact", r_artifact, "artifact JSON")->required();
    render_cmd->add_option("--tasks", r_tasks, "tasks JSONL")->required();
    render_cmd->add_option("--index", r_index, "task index");
    render_cmd->add_option("--plan", r_plan, "plan JSON")->required();
    render_cmd->add_option("--trace", r_trace, "trace JSONL")->required();
    render_cmd->add_option("--out", r_out, "output SVG")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_maze_cmd->parsed()) {
            const Maze m = gen_maze(preset_from_name(gm_preset), gm_seed);
            write_file(gm_out, maze_to_text(m));
            std::cout << "maze " << m.cols << "x" << m.rows << " -> " << gm_out << "\n";
        } else if (gen_data_cmd->parsed()) {
            const Maze m = maze_from_text(read_file(gd_maze));
            const Dataset d = gen_dataset(m, regime_from_name(gd_regime), gd_seed, gd_params);
            write_file(gd_out, dataset_to_jsonl(d));
            std::cout << d.size() << " trajectories, " << total_states(d) << " states -> "
                      << gd_out << "\n";
        } else if (build_cmd->parsed()) {
            PipelineConfig cfg = b_flags.resolve();
            if (b_landmarks > 0) cfg.n_landmarks = b_landmarks;
            if (b_dlatent > 0) cfg.d_latent = b_dlatent;
            if (b_no_support) cfg.support_filter = false;
            const Maze m = maze_from_text(read_file(b_maze));
            const Dataset d = dataset_from_jsonl(read_file(b_dataset));
            const Artifact a = build_artifact(m, d, cfg, b_seed);
            write_file(b_out, artifact_to_json(a));
            std::cout << a.graph.num_nodes() << " nodes, " << a.graph.edges.size()
                      << " edges -> " << b_out << "\n";
        } else if (gen_tasks_cmd->parsed()) {
            const Maze m = maze_from_text(read_file(gt_maze));
            std::vector<TaskSpec> tasks;
            for (int i = 0; i < gt_count; ++i)
                tasks.push_back(gen_task(m, difficulty_from_flag(gt_difficulty),
                                         gt_seed * 7919 + static_cast<std::uint64_t>(i)));
            write_file(gt_out, tasks_to_jsonl(tasks));
            std::cout << tasks.size() << " tasks -> " << gt_out << "\n";
        } else if (plan_cmd->parsed()) {
            const Artifact a = artifact_from_json(read_file(p_artifact));
            const PipelineConfig cfg = p_flags.resolve(a.config);
            Artifact tuned = a;
            tuned.config = cfg;
            const auto tasks = tasks_from_jsonl(read_file(p_tasks));
            const TaskSpec& task = tasks.at(static_cast<std::size_t>(p_index));
            const TaskContext ctx = prepare_task(tuned, task);
            const Vec2 s0 = resolve_start(tuned, task, p_start, 0);
            const int v0 = ctx.graph.nearest_node(tuned.embedding.embed(s0));
            PlanParams pp{cfg.lambda, cfg.top_k, cfg.tau_soft};
            const Plan plan = p_variant == "decoupled"
                                  ? decoupled_synthesize(ctx.graph, ctx.nba, v0, pp)
                                  : synthesize(ctx.graph, ctx.nba, v0, pp);
            write_file(p_out, plan_to_json(plan) + "\n");
            std::cout << "J=" << plan.J << " cost_pre=" << plan.cost_pre
                      << " cost_suf=" << plan.cost_suf << " -> " << p_out << "\n";
        } else if (exec_cmd->parsed()) {
            const Artifact a = artifact_from_json(read_file(e_artifact));
            const auto tasks = tasks_from_jsonl(read_file(e_tasks));
            const TaskSpec& task = tasks.at(static_cast<std::size_t>(e_index));
            const TaskContext ctx = prepare_task(a, task);
            const Plan plan = plan_from_json(read_file(e_plan));
            const Vec2 s0 = resolve_start(a, task, e_start, 0);
            ExecConfig ec;
            ec.h_td = a.config.h_td;
            ec.eps_anc = a.config.effective_eps_anc();
            ec.max_steps = a.config.max_steps;
            ec.suffix_laps = a.config.suffix_laps;
            const ExecTrace trace =
                track(a.maze, task.regions, ctx.graph, a.embedding, plan, s0, ec);
            write_file(e_out, trace_to_jsonl(trace, ctx.atoms));
            const bool ok = check_success(trace, ctx.nba, plan);
            std::cout << (ok ? "success" : "failure") << " steps=" << trace.length() << " -> "
                      << e_out << "\n";
            return ok ? 0 : 3;
        } else if (eval_cmd->parsed()) {
            const Artifact a = artifact_from_json(read_file(v_artifact));
            const PipelineConfig cfg = v_flags.resolve(a.config);
            Artifact tuned = a;
            tuned.config = cfg;
            const auto tasks = tasks_from_jsonl(read_file(v_tasks));
            std::vector<EvalRecord> records;
            const EvalSummary summary =
                evaluate(tuned, tasks, v_episodes,
                         v_variant == "decoupled" ? PlannerVariant::Decoupled
                                                  : PlannerVariant::Joint,
                         v_timing != "off", records);
            std::ostringstream os;
            os << eval_csv_header() << "\n";
            for (const auto& rec : records) os << eval_record_to_csv(rec) << "\n";
            write_file(v_out, os.str());
            std::cout << format_summary(summary) << " -> " << v_out << "\n";
        } else if (render_cmd->parsed()) {
            const Artifact a = artifact_from_json(read_file(r_artifact));
            const auto tasks = tasks_from_jsonl(read_file(r_tasks));
            const TaskSpec& task = tasks.at(static_cast<std::size_t>(r_index));
            const TaskContext ctx = prepare_task(a, task);
            const Plan plan = plan_from_json(read_file(r_plan));
            // rebuild the trace from its serialized form: only states and the
            // prefix boundary matter for the figure
            ExecTrace trace;
            std::istringstream is(read_file(r_trace));
            std::string line;
            while (std::getline(is, line)) {
                if (line.empty()) continue;
                const auto j = nlohmann::json::parse(line);
                trace.states.push_back({j.at("x"), j.at("y")});
                trace.labels.emplace_back();
                trace.target_index.push_back(j.at("target_index"));
                if (j.at("phase") == "prefix")
                    trace.prefix_end = static_cast<int>(trace.states.size()) - 1;
            }
            write_file(r_out, render_svg(a, task, ctx.graph, plan, trace));
            std::cout << r_out << "\n";
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
