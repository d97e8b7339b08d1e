#pragma once

#include <vector>

#include "json.hpp"

#include "evodesign/problem.hpp"
#include "evodesign/random.hpp"

namespace evodesign {

/// A candidate design: a partition of every element of a problem into
/// class_count classes. A valid solution has no empty class, so indices
/// 0..class_count-1 are all in use.
struct DesignSolution {
  int class_count = 0;
  std::vector<int> assignment;  // element index -> class index
};

/// Uniform independent class assignment followed by empty-class repair.
/// Requires 2 <= class_count <= element count.
DesignSolution random_solution(const DesignProblem& problem, int class_count,
                               RandomSource& rng);

/// Each element independently moves, with probability rate, to a uniformly
/// chosen different class; classes emptied by moves are repaired. The input
/// is not modified.
DesignSolution mutate(const DesignProblem& problem, const DesignSolution& solution,
                      double rate, RandomSource& rng);

/// Uniform crossover on the assignment vector followed by repair. Parents
/// must share the problem and class count.
DesignSolution crossover(const DesignProblem& problem, const DesignSolution& parent_a,
                         const DesignSolution& parent_b, RandomSource& rng);

/// Refills each empty class by moving one element out of a largest class.
/// Ties break toward the lowest class index, then the lowest element index,
/// making repair deterministic.
void repair(const DesignProblem& problem, DesignSolution& solution);

/// Throws ValidationError if the solution is not a valid partition for the
/// problem.
void validate_solution(const DesignProblem& problem, const DesignSolution& solution);

std::vector<int> class_sizes(const DesignProblem& problem, const DesignSolution& solution);

/// Wire format used by the service and UI: classes ordered by index, members
/// in problem-file order.
nlohmann::json solution_to_json(const DesignProblem& problem, const DesignSolution& solution);
DesignSolution solution_from_json(const DesignProblem& problem, const nlohmann::json& j);

}  // namespace evodesign
