#include "lassoplan/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lasso {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text, PipelineConfig base) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::string key, value;
        const auto eq = line.find('=');
        if (eq != std::string::npos) {
            key = trim(line.substr(0, eq));
            value = trim(line.substr(eq + 1));
        } else {
            const auto sp = line.find_first_of(" \t");
            if (sp == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": expected `key = value`");
            key = trim(line.substr(0, sp));
            value = trim(line.substr(sp + 1));
        }
        auto as_bool = [&] {
            if (value == "on" || value == "true" || value == "1") return true;
            if (value == "off" || value == "false" || value == "0") return false;
            throw std::runtime_error("config: bad boolean for " + key);
        };
        if (key == "htd") base.h_td = std::stod(value);
        else if (key == "d_latent") base.d_latent = std::stoi(value);
        else if (key == "landmarks") base.n_landmarks = std::stoi(value);
        else if (key == "delta_max") base.delta_max = std::stoi(value);
        else if (key == "te_tau") base.te_tau = std::stod(value);
        else if (key == "te_h") base.te_h = std::stoi(value);
        else if (key == "support_filter") base.support_filter = as_bool();
        else if (key == "tau_soft") base.tau_soft = std::stod(value);
        else if (key == "lambda") base.lambda = std::stod(value);
        else if (key == "topk") base.top_k = std::stoi(value);
        else if (key == "anchors") base.n_anchors = std::stoi(value);
        else if (key == "retrieve_anchors") base.retrieve_anchors = as_bool();
        else if (key == "proximity_weighting") base.proximity_weighting = as_bool();
        else if (key == "eps_anc") base.eps_anc = std::stod(value);
        else if (key == "max_steps") base.max_steps = std::stoi(value);
        else if (key == "suffix_laps") base.suffix_laps = std::stoi(value);
        else throw std::runtime_error("config: unknown key `" + key + "`");
    }
    return base;
}

std::map<std::string, std::string> config_entries(const PipelineConfig& c) {
    std::map<std::string, std::string> out;
    auto num = [](double v) {
        json j = v;
        return j.dump();
    };
    out["htd"] = num(c.h_td);
    out["d_latent"] = std::to_string(c.d_latent);
    out["landmarks"] = std::to_string(c.n_landmarks);
    out["delta_max"] = std::to_string(c.delta_max);
    out["te_tau"] = num(c.te_tau);
    out["te_h"] = std::to_string(c.te_h);
    out["support_filter"] = c.support_filter ? "on" : "off";
    out["tau_soft"] = num(c.tau_soft);
    out["lambda"] = num(c.lambda);
    out["topk"] = std::to_string(c.top_k);
    out["anchors"] = std::to_string(c.n_anchors);
    out["retrieve_anchors"] = c.retrieve_anchors ? "on" : "off";
    out["proximity_weighting"] = c.proximity_weighting ? "on" : "off";
    out["eps_anc"] = num(c.eps_anc);
    out["max_steps"] = std::to_string(c.max_steps);
    out["suffix_laps"] = std::to_string(c.suffix_laps);
    return out;
}

namespace {

json config_to_json(const PipelineConfig& c) {
    return json{{"htd", c.h_td},
                {"d_latent", c.d_latent},
                {"landmarks", c.n_landmarks},
                {"delta_max", c.delta_max},
                {"te_tau", c.te_tau},
                {"te_h", c.te_h},
                {"support_filter", c.support_filter},
                {"tau_soft", c.tau_soft},
                {"lambda", c.lambda},
                {"topk", c.top_k},
                {"anchors", c.n_anchors},
                {"retrieve_anchors", c.retrieve_anchors},
                {"proximity_weighting", c.proximity_weighting},
                {"eps_anc", c.eps_anc},
                {"max_steps", c.max_steps},
                {"suffix_laps", c.suffix_laps}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    c.h_td = j.at("htd");
    c.d_latent = j.at("d_latent");
    c.n_landmarks = j.at("landmarks");
    c.delta_max = j.at("delta_max");
    c.te_tau = j.at("te_tau");
    c.te_h = j.at("te_h");
    c.support_filter = j.at("support_filter");
    c.tau_soft = j.at("tau_soft");
    c.lambda = j.at("lambda");
    c.top_k = j.at("topk");
    c.n_anchors = j.at("anchors");
    c.retrieve_anchors = j.at("retrieve_anchors");
    c.proximity_weighting = j.at("proximity_weighting");
    c.eps_anc = j.at("eps_anc");
    c.max_steps = j.at("max_steps");
    c.suffix_laps = j.at("suffix_laps");
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Datasets

std::string dataset_to_jsonl(const Dataset& d) {
    std::ostringstream os;
    for (const auto& traj : d) {
        json states = json::array();
        for (const auto& s : traj.states) states.push_back({s.x, s.y});
        json actions = json::array();
        for (const auto& a : traj.actions) actions.push_back({a.x, a.y});
        os << json{{"states", states}, {"actions", actions}}.dump() << "\n";
    }
    return os.str();
}

Dataset dataset_from_jsonl(const std::string& text) {
    Dataset out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        const json j = json::parse(line);
        Trajectory t;
        for (const auto& s : j.at("states")) t.states.push_back({s.at(0), s.at(1)});
        for (const auto& a : j.at("actions")) t.actions.push_back({a.at(0), a.at(1)});
        if (t.states.size() < 2 || t.actions.size() + 1 != t.states.size())
            throw std::runtime_error("dataset: malformed trajectory record");
        out.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tasks

namespace {

json region_to_json(const Region& r, const std::string& label_name) {
    json j;
    j["label"] = label_name;
    if (r.shape == RegionShape::Circle) {
        j["shape"] = "circle";
        j["params"] = {r.a.x, r.a.y, r.radius};
    } else {
        j["shape"] = "rect";
        j["params"] = {r.a.x, r.a.y, r.b.x, r.b.y};
    }
    return j;
}

Region region_from_json(const json& j, LabelId label) {
    Region r;
    r.label = label;
    const std::string shape = j.at("shape");
    const auto& p = j.at("params");
    if (shape == "circle") {
        r.shape = RegionShape::Circle;
        r.a = {p.at(0), p.at(1)};
        r.radius = p.at(2);
    } else if (shape == "rect") {
        r.shape = RegionShape::Rect;
        r.a = {p.at(0), p.at(1)};
        r.b = {p.at(2), p.at(3)};
    } else {
        throw std::runtime_error("task: unknown region shape `" + shape + "`");
    }
    return r;
}

std::string difficulty_name(Difficulty d) {
    switch (d) {
        case Difficulty::Simple: return "simple";
        case Difficulty::Medium: return "medium";
        case Difficulty::Hard: return "hard";
    }
    return "simple";
}

Difficulty difficulty_from_name(const std::string& s) {
    if (s == "simple") return Difficulty::Simple;
    if (s == "medium") return Difficulty::Medium;
    if (s == "hard") return Difficulty::Hard;
    throw std::runtime_error("task: unknown difficulty `" + s + "`");
}

}  // namespace

std::string task_to_json(const TaskSpec& t) {
    json regions = json::array();
    for (std::size_t i = 0; i < t.regions.size(); ++i)
        regions.push_back(region_to_json(t.regions[i], t.label_names[i]));
    return json{{"formula", t.formula},
                {"regions", regions},
                {"difficulty", difficulty_name(t.difficulty)},
                {"seed", t.seed}}
        .dump();
}

TaskSpec task_from_json(const std::string& line) {
    const json j = json::parse(line);
    TaskSpec t;
    t.formula = j.at("formula");
    t.difficulty = difficulty_from_name(j.at("difficulty"));
    t.seed = j.at("seed");
    LabelId next = 0;
    for (const auto& rj : j.at("regions")) {
        t.label_names.push_back(rj.at("label"));
        t.regions.push_back(region_from_json(rj, next++));
    }
    return t;
}

std::string tasks_to_jsonl(const std::vector<TaskSpec>& tasks) {
    std::ostringstream os;
    for (const auto& t : tasks) os << task_to_json(t) << "\n";
    return os.str();
}

std::vector<TaskSpec> tasks_from_jsonl(const std::string& text) {
    std::vector<TaskSpec> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        out.push_back(task_from_json(line));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph and artifact

namespace {

json matrix_to_json(const std::vector<double>& flat, int cols) {
    json rows = json::array();
    for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(cols)) {
        json row = json::array();
        for (int c = 0; c < cols; ++c) row.push_back(flat[i + static_cast<std::size_t>(c)]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> matrix_from_json(const json& rows, int cols) {
    std::vector<double> out;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols)
            throw std::runtime_error("artifact: ragged matrix row");
        for (const auto& v : row) out.push_back(v);
    }
    return out;
}

json embedding_to_json(const Embedding& e) {
    json j;
    j["d_latent"] = e.d_latent;
    j["landmark_states"] = e.landmark_states;
    j["landmark_coords"] = matrix_to_json(e.landmark_coords, e.d_latent);
    j["eigenvalues"] = e.eigenvalues;
    j["inv_projection"] = matrix_to_json(e.inv_projection, e.num_landmarks());
    j["mean_sq_dist"] = e.mean_sq_dist;
    json states = json::array();
    for (const auto& s : e.states) states.push_back({s.x, s.y});
    j["states"] = std::move(states);
    j["state_lm_dist"] = matrix_to_json(e.state_lm_dist, e.num_landmarks());
    return j;
}

Embedding embedding_from_json(const json& j) {
    Embedding e;
    e.d_latent = j.at("d_latent");
    e.landmark_states = j.at("landmark_states").get<std::vector<int>>();
    e.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    e.mean_sq_dist = j.at("mean_sq_dist").get<std::vector<double>>();
    e.landmark_coords = matrix_from_json(j.at("landmark_coords"), e.d_latent);
    const int m = static_cast<int>(e.landmark_states.size());
    e.inv_projection = matrix_from_json(j.at("inv_projection"), m);
    for (const auto& s : j.at("states")) e.states.push_back({s.at(0), s.at(1)});
    e.state_lm_dist = matrix_from_json(j.at("state_lm_dist"), m);
    e.rebuild_index();
    return e;
}

json graph_to_json_obj(const LatentGraph& g) {
    json j;
    j["version"] = 1;
    j["htd"] = g.h_td;
    json nodes = json::array();
    for (const auto& c : g.coords) nodes.push_back(c);
    j["nodes"] = std::move(nodes);
    j["node2raw"] = g.node2raw;
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back(json::array({e.from, e.to, e.weight, e.fallback}));
    j["edges"] = std::move(edges);
    json anchors = json::array();
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (!g.is_anchor(v)) continue;
        const auto& meta = *g.anchor[static_cast<std::size_t>(v)];
        anchors.push_back(json{{"node", v},
                               {"label", meta.label},
                               {"source", {meta.source.x, meta.source.y}}});
    }
    j["anchors"] = std::move(anchors);
    j["soft_labels"] = g.soft_labels;
    return j;
}

LatentGraph graph_from_json_obj(const json& j) {
    LatentGraph g;
    g.h_td = j.at("htd");
    for (const auto& c : j.at("nodes")) g.coords.push_back(c.get<LatentVec>());
    g.node2raw = j.at("node2raw").get<std::vector<std::vector<int>>>();
    for (const auto& e : j.at("edges"))
        g.edges.push_back({e.at(0), e.at(1), e.at(2), e.at(3)});
    g.anchor.assign(static_cast<std::size_t>(g.num_nodes()), std::nullopt);
    for (const auto& a : j.at("anchors")) {
        AnchorMeta meta;
        meta.label = a.at("label");
        meta.source = {a.at("source").at(0), a.at("source").at(1)};
        g.anchor[a.at("node").get<std::size_t>()] = meta;
    }
    g.soft_labels = j.at("soft_labels").get<std::vector<std::vector<double>>>();
    if (g.soft_labels.empty())
        g.soft_labels.assign(static_cast<std::size_t>(g.num_nodes()), {});
    return g;
}

json maze_to_json(const Maze& m) {
    return json{{"cell_size", m.cell_size}, {"v_max", m.v_max}, {"grid", maze_to_text(m)}};
}

Maze maze_from_json(const json& j) {
    // the grid text embeds cell_size and v_max in its header
    return maze_from_text(j.at("grid"));
}

}  // namespace

std::string graph_to_json(const LatentGraph& g) { return graph_to_json_obj(g).dump(); }

LatentGraph graph_from_json(const std::string& text) {
    return graph_from_json_obj(json::parse(text));
}

std::string artifact_to_json(const Artifact& a) {
    json j;
    j["version"] = 1;
    j["kind"] = "artifact";
    j["maze"] = maze_to_json(a.maze);
    j["config"] = config_to_json(a.config);
    j["embedding"] = embedding_to_json(a.embedding);
    j["graph"] = graph_to_json_obj(a.graph);
    return j.dump();
}

Artifact artifact_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind") != "artifact") throw std::runtime_error("not an artifact file");
    Artifact a;
    a.maze = maze_from_json(j.at("maze"));
    a.config = config_from_json(j.at("config"));
    a.embedding = embedding_from_json(j.at("embedding"));
    a.graph = graph_from_json_obj(j.at("graph"));
    return a;
}

// ---------------------------------------------------------------------------
// Plans and traces

std::string plan_to_json(const Plan& p) {
    return json{{"prefix", p.prefix},     {"suffix", p.suffix}, {"cost_pre", p.cost_pre},
                {"cost_suf", p.cost_suf}, {"lambda", p.lambda}, {"J", p.J},
                {"q_star", p.q_star}}
        .dump();
}

Plan plan_from_json(const std::string& text) {
    const json j = json::parse(text);
    Plan p;
    p.prefix = j.at("prefix").get<std::vector<int>>();
    p.suffix = j.at("suffix").get<std::vector<int>>();
    p.cost_pre = j.at("cost_pre");
    p.cost_suf = j.at("cost_suf");
    p.lambda = j.at("lambda");
    p.J = j.at("J");
    p.q_star = j.at("q_star");
    return p;
}

std::string trace_to_jsonl(const ExecTrace& t, const AtomTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        json labels = json::array();
        for (LabelId l : t.labels[i].to_vector()) labels.push_back(table.name(l));
        const bool suffix_phase = t.prefix_end >= 0 && static_cast<int>(i) > t.prefix_end;
        os << json{{"step", i},
                   {"x", t.states[i].x},
                   {"y", t.states[i].y},
                   {"labels", labels},
                   {"target_index", t.target_index[i]},
                   {"phase", suffix_phase ? "suffix" : "prefix"}}
                  .dump()
           << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Evaluation CSV

std::string eval_csv_header() { return "task_id,episode,variant,success,plan_time_s,traj_len"; }

std::string eval_record_to_csv(const EvalRecord& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", r.plan_time_s);
    std::ostringstream os;
    os << r.task_id << "," << r.episode << "," << r.variant << "," << (r.success ? 1 : 0) << ","
       << buf << "," << r.traj_len;
    return os.str();
}

EvalRecord eval_record_from_csv(const std::string& line) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 6) throw std::runtime_error("csv: expected 6 fields");
    EvalRecord r;
    r.task_id = parts[0];
    r.episode = std::stoi(parts[1]);
    r.variant = parts[2];
    r.success = parts[3] == "1";
    r.plan_time_s = std::stod(parts[4]);
    r.traj_len = std::stoi(parts[5]);
    return r;
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
}

}  // namespace lasso
