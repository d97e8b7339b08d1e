#pragma once

#include <string_view>

#include "json.hpp"

#include "evodesign/genome.hpp"

namespace evodesign {

/// The five minimization objectives a tournament can compare on.
enum class Objective { kCoupling = 0, kNac, kEc, kIu, kAtmr };

/// The four ratable elegance measures.
enum class Measure { kNac = 0, kEc, kIu, kAtmr };

constexpr int kMeasureCount = 4;

Objective objective_of(Measure measure);
std::string_view measure_name(Measure measure);  // "nac", "ec", "iu", "atmr"
std::string_view objective_name(Objective objective);
Measure measure_from_name(std::string_view name);

/// Metric values of one candidate design. All five are minimization
/// objectives; coupling is a fraction of uses, the others are population
/// standard deviations over the classes.
struct MetricVector {
  double coupling = 0.0;
  double nac = 0.0;
  double ec = 0.0;
  double iu = 0.0;
  double atmr = 0.0;

  double objective_value(Objective objective) const;
  double measure_value(Measure measure) const { return objective_value(objective_of(measure)); }
};

void to_json(nlohmann::json& j, const MetricVector& m);
void from_json(const nlohmann::json& j, MetricVector& m);

/// Fraction of uses whose method and attribute live in different classes.
double coupling(const DesignProblem& problem, const DesignSolution& solution);

/// Mean of the two population standard deviations of per-class attribute and
/// per-class method counts.
double nac_elegance(const DesignProblem& problem, const DesignSolution& solution);

/// Population standard deviation of per-class external-couple incidence. An
/// external use counts toward both endpoint classes.
double ec_elegance(const DesignProblem& problem, const DesignSolution& solution);

/// Population standard deviation of per-class internal-use counts.
double iu_elegance(const DesignProblem& problem, const DesignSolution& solution);

/// Population standard deviation of per-class attribute-to-method ratios,
/// with zero-method denominators clamped to 1.
double atmr_elegance(const DesignProblem& problem, const DesignSolution& solution);

MetricVector evaluate(const DesignProblem& problem, const DesignSolution& solution);

}  // namespace evodesign
