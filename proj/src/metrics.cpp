#include "evodesign/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace evodesign {

using nlohmann::json;

Objective objective_of(Measure measure) {
  return static_cast<Objective>(static_cast<int>(measure) + 1);
}

std::string_view measure_name(Measure measure) {
  switch (measure) {
    case Measure::kNac: return "nac";
    case Measure::kEc: return "ec";
    case Measure::kIu: return "iu";
    case Measure::kAtmr: return "atmr";
  }
  throw std::invalid_argument("unknown measure");
}

std::string_view objective_name(Objective objective) {
  if (objective == Objective::kCoupling) return "coupling";
  return measure_name(static_cast<Measure>(static_cast<int>(objective) - 1));
}

Measure measure_from_name(std::string_view name) {
  if (name == "nac") return Measure::kNac;
  if (name == "ec") return Measure::kEc;
  if (name == "iu") return Measure::kIu;
  if (name == "atmr") return Measure::kAtmr;
  throw std::invalid_argument("unknown elegance measure '" + std::string(name) +
                              "' (expected nac, ec, iu or atmr)");
}

double MetricVector::objective_value(Objective objective) const {
  switch (objective) {
    case Objective::kCoupling: return coupling;
    case Objective::kNac: return nac;
    case Objective::kEc: return ec;
    case Objective::kIu: return iu;
    case Objective::kAtmr: return atmr;
  }
  throw std::invalid_argument("unknown objective");
}

void to_json(json& j, const MetricVector& m) {
  j = json{{"coupling", m.coupling}, {"nac", m.nac}, {"ec", m.ec}, {"iu", m.iu},
           {"atmr", m.atmr}};
}

void from_json(const json& j, MetricVector& m) {
  j.at("coupling").get_to(m.coupling);
  j.at("nac").get_to(m.nac);
  j.at("ec").get_to(m.ec);
  j.at("iu").get_to(m.iu);
  j.at("atmr").get_to(m.atmr);
}

namespace {

double population_stddev(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= n;
  double variance = 0.0;
  for (const double v : values) variance += (v - mean) * (v - mean);
  return std::sqrt(variance / n);
}

struct ClassTallies {
  std::vector<double> attributes;
  std::vector<double> methods;
  std::vector<double> internal_uses;
  std::vector<double> external_couples;
  int external_use_count = 0;
};

ClassTallies tally(const DesignProblem& problem, const DesignSolution& solution) {
  ClassTallies t;
  const int k = solution.class_count;
  t.attributes.assign(k, 0.0);
  t.methods.assign(k, 0.0);
  t.internal_uses.assign(k, 0.0);
  t.external_couples.assign(k, 0.0);

  for (int i = 0; i < problem.attribute_count(); ++i)
    t.attributes[solution.assignment[problem.attribute_element(i)]] += 1.0;
  for (int i = 0; i < problem.method_count(); ++i)
    t.methods[solution.assignment[problem.method_element(i)]] += 1.0;

  for (const auto& [method, attribute] : problem.uses()) {
    const int method_class = solution.assignment[problem.method_element(method)];
    const int attribute_class = solution.assignment[problem.attribute_element(attribute)];
    if (method_class == attribute_class) {
      t.internal_uses[method_class] += 1.0;
    } else {
      t.external_couples[method_class] += 1.0;
      t.external_couples[attribute_class] += 1.0;
      ++t.external_use_count;
    }
  }
  return t;
}

}  // namespace

double coupling(const DesignProblem& problem, const DesignSolution& solution) {
  const auto t = tally(problem, solution);
  return static_cast<double>(t.external_use_count) /
         static_cast<double>(problem.use_count());
}

double nac_elegance(const DesignProblem& problem, const DesignSolution& solution) {
  const auto t = tally(problem, solution);
  return (population_stddev(t.attributes) + population_stddev(t.methods)) / 2.0;
}

double ec_elegance(const DesignProblem& problem, const DesignSolution& solution) {
  return population_stddev(tally(problem, solution).external_couples);
}

double iu_elegance(const DesignProblem& problem, const DesignSolution& solution) {
  return population_stddev(tally(problem, solution).internal_uses);
}

double atmr_elegance(const DesignProblem& problem, const DesignSolution& solution) {
  const auto t = tally(problem, solution);
  std::vector<double> ratios(t.attributes.size());
  for (std::size_t c = 0; c < ratios.size(); ++c)
    ratios[c] = t.attributes[c] / std::max(t.methods[c], 1.0);
  return population_stddev(ratios);
}

MetricVector evaluate(const DesignProblem& problem, const DesignSolution& solution) {
  const auto t = tally(problem, solution);
  MetricVector m;
  m.coupling = static_cast<double>(t.external_use_count) /
               static_cast<double>(problem.use_count());
  m.nac = (population_stddev(t.attributes) + population_stddev(t.methods)) / 2.0;
  m.ec = population_stddev(t.external_couples);
  m.iu = population_stddev(t.internal_uses);
  std::vector<double> ratios(t.attributes.size());
  for (std::size_t c = 0; c < ratios.size(); ++c)
    ratios[c] = t.attributes[c] / std::max(t.methods[c], 1.0);
  m.atmr = population_stddev(ratios);
  return m;
}

}  // namespace evodesign
