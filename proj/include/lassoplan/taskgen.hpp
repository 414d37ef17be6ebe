#pragma once

#include <string>
#include <vector>

#include "lassoplan/buchi.hpp"
#include "lassoplan/world.hpp"

namespace lasso {

// ---------------------------------------------------------------------------
// Random benchmark tasks: template formulas over randomly placed disjoint
// regions, validity-checked at the automaton level (the pruned automaton must
// keep a reachable accepting state).

enum class Difficulty { Simple, Medium, Hard };

enum class TaskTemplate { Reach, Safety, Sequence, Coverage, Conditional, Patrol, Choice };

struct TaskSpec {
    std::string formula;
    std::vector<std::string> label_names;  // atom names; label id = index
    std::vector<Region> regions;           // one per label, same order
    Difficulty difficulty = Difficulty::Simple;
    std::uint64_t seed = 0;
};

struct TaskGenParams {
    int max_retries = 80;
    double min_region_gap = 0.3;  // world units between distinct regions
};

// formula text of one template over the given atom names
std::string render_template(TaskTemplate t, const std::vector<std::string>& atoms);

TaskSpec gen_task(const Maze& maze, Difficulty difficulty, std::uint64_t seed,
                  const TaskGenParams& params = {});

// parse + NNF + translate + prune for a task's formula; the table is filled
// with the task's label names so region labels and formula atoms agree
Nba task_automaton(const TaskSpec& task, AtomTable& table);

}  // namespace lasso
