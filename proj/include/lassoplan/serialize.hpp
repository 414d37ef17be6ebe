#pragma once

#include <map>
#include <string>
#include <vector>

#include "lassoplan/embed.hpp"
#include "lassoplan/exec.hpp"
#include "lassoplan/graph.hpp"
#include "lassoplan/plan.hpp"
#include "lassoplan/taskgen.hpp"
#include "lassoplan/world.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Build-time configuration shared by the pipeline stages. Values of -1 mean
// "derive from h_td" (delta_max = 4*h_td, eps_anc = h_td/2).

struct PipelineConfig {
    double h_td = 8.0;
    int d_latent = 2;
    int n_landmarks = 64;
    int delta_max = -1;
    double te_tau = 0.0;
    int te_h = 4;
    bool support_filter = true;
    double tau_soft = 0.5;
    double lambda = 0.5;
    int top_k = 8;
    int n_anchors = 5;
    bool retrieve_anchors = false;
    bool proximity_weighting = false;
    double eps_anc = -1.0;
    int max_steps = 6000;
    int suffix_laps = 1;

    int effective_delta_max() const { return delta_max > 0 ? delta_max : static_cast<int>(4 * h_td); }
    double effective_eps_anc() const { return eps_anc > 0 ? eps_anc : 0.5 * h_td; }
};

// flat `key = value` text, '#' comments; unknown keys are an error
PipelineConfig parse_config_text(const std::string& text, PipelineConfig base = {});
std::map<std::string, std::string> config_entries(const PipelineConfig& c);

// ---------------------------------------------------------------------------
// File formats. JSON lines for datasets, tasks and traces; a single JSON
// document for artifacts and plans. All serialization round-trips exactly.

std::string dataset_to_jsonl(const Dataset& d);
Dataset dataset_from_jsonl(const std::string& text);

std::string task_to_json(const TaskSpec& t);
TaskSpec task_from_json(const std::string& line);
std::string tasks_to_jsonl(const std::vector<TaskSpec>& tasks);
std::vector<TaskSpec> tasks_from_jsonl(const std::string& text);

struct Artifact {
    Maze maze;
    PipelineConfig config;
    Embedding embedding;
    LatentGraph graph;
};

std::string artifact_to_json(const Artifact& a);
Artifact artifact_from_json(const std::string& text);

// augmented graph: base graph plus soft_labels and anchors sections
std::string graph_to_json(const LatentGraph& g);
LatentGraph graph_from_json(const std::string& text);

std::string plan_to_json(const Plan& p);
Plan plan_from_json(const std::string& text);

std::string trace_to_jsonl(const ExecTrace& t, const AtomTable& table);

// ---------------------------------------------------------------------------
// Evaluation records

struct EvalRecord {
    std::string task_id;
    int episode = 0;
    std::string variant;  // joint | decoupled
    bool success = false;
    double plan_time_s = 0.0;
    int traj_len = 0;
};

std::string eval_csv_header();
std::string eval_record_to_csv(const EvalRecord& r);
EvalRecord eval_record_from_csv(const std::string& line);

// ---------------------------------------------------------------------------
// small file helpers

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lasso
