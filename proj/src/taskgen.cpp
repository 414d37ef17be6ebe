#include "lassoplan/taskgen.hpp"

#include <algorithm>

#include "lassoplan/ltl.hpp"

namespace lasso {

std::string render_template(TaskTemplate t, const std::vector<std::string>& atoms) {
    const auto m = atoms.size();
    switch (t) {
        case TaskTemplate::Reach:
            return "F " + atoms[0];
        case TaskTemplate::Safety:
            return "G !" + atoms[0];
        case TaskTemplate::Sequence: {
            // F (a & F (b & F c))
            std::string s = atoms[m - 1];
            for (std::size_t i = m - 1; i-- > 0;) s = atoms[i] + " & F (" + s + ")";
            return m == 1 ? "F " + atoms[0] : "F (" + s + ")";
        }
        case TaskTemplate::Coverage: {
            std::string s;
            for (std::size_t i = 0; i < m; ++i) {
                if (i) s += " & ";
                s += "F " + atoms[i];
            }
            return s;
        }
        case TaskTemplate::Conditional:
            return "!" + atoms[0] + " U " + atoms[1];
        case TaskTemplate::Patrol: {
            if (m == 1) return "G F " + atoms[0];
            std::string s = atoms[m - 1];
            for (std::size_t i = m - 1; i-- > 0;) s = atoms[i] + " & F (" + s + ")";
            return "G F (" + s + ")";
        }
        case TaskTemplate::Choice: {
            std::string s;
            for (std::size_t i = 0; i < m; ++i) {
                if (i) s += " | ";
                s += atoms[i];
            }
            return "F (" + s + ")";
        }
    }
    throw std::logic_error("unreachable");
}

namespace {

struct TierSpec {
    int min_templates;
    int max_templates;
    int max_regions;
};

TierSpec tier_of(Difficulty d) {
    switch (d) {
        case Difficulty::Simple: return {1, 1, 5};
        case Difficulty::Medium: return {2, 3, 5};
        case Difficulty::Hard: return {3, 4, 8};
    }
    return {1, 1, 5};
}

// atom count drawn for one template instance, bounded by the pool size
int draw_arity(TaskTemplate t, int pool, Rng& rng) {
    switch (t) {
        case TaskTemplate::Reach:
        case TaskTemplate::Safety:
            return 1;
        case TaskTemplate::Conditional:
            return 2;
        case TaskTemplate::Patrol:
            return static_cast<int>(rng.uniform_int(1, std::min(3, pool)));
        case TaskTemplate::Sequence:
        case TaskTemplate::Coverage:
        case TaskTemplate::Choice:
            return static_cast<int>(rng.uniform_int(2, std::max(2, std::min(4, pool))));
    }
    return 1;
}

std::string build_formula(Difficulty difficulty, Rng& rng, int& regions_used) {
    const TierSpec tier = tier_of(difficulty);
    const int n_templates =
        static_cast<int>(rng.uniform_int(tier.min_templates, tier.max_templates));
    const int pool = static_cast<int>(rng.uniform_int(
        std::min(2, tier.max_regions), tier.max_regions));

    static const TaskTemplate all[7] = {TaskTemplate::Reach,    TaskTemplate::Safety,
                                        TaskTemplate::Sequence, TaskTemplate::Coverage,
                                        TaskTemplate::Conditional, TaskTemplate::Patrol,
                                        TaskTemplate::Choice};
    std::vector<int> used;  // pool indices appearing in the formula, in first-use order
    auto pool_names = [&](const std::vector<int>& picks) {
        std::vector<std::string> names;
        for (int p : picks) {
            auto it = std::find(used.begin(), used.end(), p);
            std::size_t idx;
            if (it == used.end()) {
                used.push_back(p);
                idx = used.size() - 1;
            } else {
                idx = static_cast<std::size_t>(it - used.begin());
            }
            names.push_back("r" + std::to_string(idx));
        }
        return names;
    };

    std::string text;
    for (int i = 0; i < n_templates; ++i) {
        const TaskTemplate t = all[rng.uniform_int(0, 6)];
        const int arity = std::min(draw_arity(t, pool, rng), pool);
        // distinct pool slots within one template
        std::vector<int> slots(static_cast<std::size_t>(pool));
        for (int s = 0; s < pool; ++s) slots[static_cast<std::size_t>(s)] = s;
        rng.shuffle(slots);
        slots.resize(static_cast<std::size_t>(arity));
        const std::string part = render_template(t, pool_names(slots));
        if (text.empty())
            text = n_templates == 1 ? part : "(" + part + ")";
        else
            text += " & (" + part + ")";
    }
    regions_used = static_cast<int>(used.size());
    return text;
}

Region place_region(const Maze& maze, LabelId label, const std::vector<Region>& placed,
                    double min_gap, Rng& rng) {
    for (int attempt = 0; attempt < 400; ++attempt) {
        Region r;
        r.label = label;
        if (rng.chance(0.5)) {
            r.shape = RegionShape::Circle;
            r.radius = rng.uniform(0.3, 0.45);
            r.a = {rng.uniform(0.0, maze.width()), rng.uniform(0.0, maze.height())};
        } else {
            r.shape = RegionShape::Rect;
            const double hx = rng.uniform(0.3, 0.5);
            const double hy = rng.uniform(0.3, 0.5);
            const Vec2 c{rng.uniform(0.0, maze.width()), rng.uniform(0.0, maze.height())};
            r.a = {c.x - hx, c.y - hy};
            r.b = {c.x + hx, c.y + hy};
        }
        if (!region_in_free_space(maze, r)) continue;
        bool ok = true;
        for (const auto& other : placed) {
            Region grown = r;  // enforce a gap by growing this candidate
            if (grown.shape == RegionShape::Circle) {
                grown.radius += min_gap;
            } else {
                grown.a = {grown.a.x - min_gap, grown.a.y - min_gap};
                grown.b = {grown.b.x + min_gap, grown.b.y + min_gap};
            }
            if (!regions_disjoint(grown, other)) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
    }
    throw EmptyRegionError("could not place a disjoint free-space region");
}

}  // namespace

Nba task_automaton(const TaskSpec& task, AtomTable& table) {
    for (const auto& name : task.label_names) table.intern(name);
    const FormulaPtr f = parse_formula(task.formula, table, /*allow_new_atoms=*/false);
    return normalize_and_prune(translate(to_nnf(f)));
}

TaskSpec gen_task(const Maze& maze, Difficulty difficulty, std::uint64_t seed,
                  const TaskGenParams& params) {
    Rng rng(seed);
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        int n_regions = 0;
        TaskSpec task;
        task.difficulty = difficulty;
        task.seed = seed;
        task.formula = build_formula(difficulty, rng, n_regions);
        for (int l = 0; l < n_regions; ++l) task.label_names.push_back("r" + std::to_string(l));

        // logical validity: the pruned automaton must keep an accepting state
        try {
            AtomTable table;
            (void)task_automaton(task, table);
        } catch (const EmptyAutomatonError&) {
            continue;
        } catch (const std::runtime_error&) {
            continue;  // translation overflow and kin: resample
        }

        try {
            for (int l = 0; l < n_regions; ++l)
                task.regions.push_back(
                    place_region(maze, l, task.regions, params.min_region_gap, rng));
        } catch (const EmptyRegionError&) {
            continue;
        }
        return task;
    }
    throw GenerationExhaustedError("task generation failed after retry cap");
}

}  // namespace lasso
