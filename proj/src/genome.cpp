#include "evodesign/genome.hpp"

#include <algorithm>
#include <cassert>
#include <string>
#include <unordered_map>

#include "evodesign/errors.hpp"

namespace evodesign {

using nlohmann::json;

namespace {

void check_bound(const DesignProblem& problem, const DesignSolution& solution,
                 const char* op) {
  if (static_cast<int>(solution.assignment.size()) != problem.element_count())
    throw std::invalid_argument(std::string(op) + ": solution not bound to this problem");
}

}  // namespace

std::vector<int> class_sizes(const DesignProblem& problem, const DesignSolution& solution) {
  check_bound(problem, solution, "class_sizes");
  std::vector<int> sizes(solution.class_count, 0);
  for (const int c : solution.assignment) {
    if (c < 0 || c >= solution.class_count)
      throw ValidationError("class index " + std::to_string(c) + " out of range");
    ++sizes[c];
  }
  return sizes;
}

void validate_solution(const DesignProblem& problem, const DesignSolution& solution) {
  if (solution.class_count < 2)
    throw ValidationError("class count must be at least 2");
  if (solution.class_count > problem.element_count())
    throw ValidationError("class count exceeds element count");
  if (static_cast<int>(solution.assignment.size()) != problem.element_count())
    throw ValidationError("assignment length does not match problem element count");
  for (const int size : class_sizes(problem, solution))
    if (size == 0) throw ValidationError("solution contains an empty class");
}

void repair(const DesignProblem& problem, DesignSolution& solution) {
  check_bound(problem, solution, "repair");
  std::vector<int> sizes(solution.class_count, 0);
  for (const int c : solution.assignment) ++sizes[c];

  for (int empty = 0; empty < solution.class_count; ++empty) {
    if (sizes[empty] != 0) continue;
    const int donor = static_cast<int>(
        std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    assert(sizes[donor] >= 2);
    for (int element = 0; element < problem.element_count(); ++element) {
      if (solution.assignment[element] == donor) {
        solution.assignment[element] = empty;
        --sizes[donor];
        ++sizes[empty];
        break;
      }
    }
  }
}

DesignSolution random_solution(const DesignProblem& problem, int class_count,
                               RandomSource& rng) {
  if (class_count < 2 || class_count > problem.element_count())
    throw std::invalid_argument("class count must lie in [2, element count], got " +
                                std::to_string(class_count));
  DesignSolution solution;
  solution.class_count = class_count;
  solution.assignment.resize(problem.element_count());
  for (int& c : solution.assignment)
    c = static_cast<int>(rng.uniform_index(class_count));
  repair(problem, solution);
  return solution;
}

DesignSolution mutate(const DesignProblem& problem, const DesignSolution& solution,
                      double rate, RandomSource& rng) {
  if (rate < 0.0 || rate > 1.0)
    throw std::invalid_argument("mutation rate must lie in [0, 1]");
  check_bound(problem, solution, "mutate");
  DesignSolution out = solution;
  const int k = out.class_count;
  for (int element = 0; element < problem.element_count(); ++element) {
    if (!rng.bernoulli(rate)) continue;
    const int current = out.assignment[element];
    const int draw = static_cast<int>(rng.uniform_index(k - 1));
    out.assignment[element] = draw < current ? draw : draw + 1;
  }
  repair(problem, out);
  return out;
}

DesignSolution crossover(const DesignProblem& problem, const DesignSolution& parent_a,
                         const DesignSolution& parent_b, RandomSource& rng) {
  check_bound(problem, parent_a, "crossover");
  check_bound(problem, parent_b, "crossover");
  if (parent_a.class_count != parent_b.class_count)
    throw std::invalid_argument("crossover: parents have different class counts");

  DesignSolution child;
  child.class_count = parent_a.class_count;
  child.assignment.resize(parent_a.assignment.size());
  for (std::size_t element = 0; element < child.assignment.size(); ++element) {
    child.assignment[element] = rng.bernoulli(0.5) ? parent_a.assignment[element]
                                                   : parent_b.assignment[element];
  }
  repair(problem, child);
  return child;
}

json solution_to_json(const DesignProblem& problem, const DesignSolution& solution) {
  check_bound(problem, solution, "solution_to_json");
  json classes = json::array();
  for (int c = 0; c < solution.class_count; ++c) {
    json attributes = json::array();
    for (int i = 0; i < problem.attribute_count(); ++i)
      if (solution.assignment[problem.attribute_element(i)] == c)
        attributes.push_back(problem.attributes()[i]);
    json methods = json::array();
    for (int i = 0; i < problem.method_count(); ++i)
      if (solution.assignment[problem.method_element(i)] == c)
        methods.push_back(problem.methods()[i]);
    classes.push_back({{"index", c},
                       {"attributes", std::move(attributes)},
                       {"methods", std::move(methods)}});
  }
  return json{{"classes", std::move(classes)}};
}

DesignSolution solution_from_json(const DesignProblem& problem, const json& j) {
  if (!j.is_object() || !j.contains("classes") || !j.at("classes").is_array())
    throw ParseError("candidate payload: \"classes\" must be an array");

  std::unordered_map<std::string, int> element_by_name;
  for (int e = 0; e < problem.element_count(); ++e)
    element_by_name.emplace(problem.element_name(e), e);

  DesignSolution solution;
  solution.class_count = static_cast<int>(j.at("classes").size());
  solution.assignment.assign(problem.element_count(), -1);
  for (const auto& cls : j.at("classes")) {
    const int index = cls.at("index").get<int>();
    for (const char* key : {"attributes", "methods"}) {
      for (const auto& name : cls.at(key)) {
        auto it = element_by_name.find(name.get<std::string>());
        if (it == element_by_name.end())
          throw ValidationError("candidate payload references unknown element '" +
                                name.get<std::string>() + "'");
        solution.assignment[it->second] = index;
      }
    }
  }
  validate_solution(problem, solution);
  return solution;
}

}  // namespace evodesign
