#pragma once

#include <cstdint>
#include <string>

#include "evodesign/metrics.hpp"
#include "evodesign/random.hpp"

namespace evodesign {

/// Simulated designer: maps a presented candidate to a 1..5 star rating so
/// episodes can run headless and reproducibly. One instance serves one
/// episode; the purist kind keeps mutable normalization state.
class Designer {
 public:
  enum class Kind { kConstant, kUniformRandom, kMeasurePurist };

  static Designer constant(int stars);
  static Designer uniform_random(std::uint64_t seed);
  static Designer measure_purist(Measure target);

  /// Parses a profile spec string: "constant:3", "random:42", "purist:nac".
  static Designer parse(const std::string& spec);

  /// Rates a presented candidate. The purist rates the candidate's value of
  /// its own target measure regardless of which measure selected the
  /// candidate; the presented measure is accepted for interface completeness.
  int rate(const MetricVector& candidate, Measure presented);

  Kind kind() const { return kind_; }
  const std::string& spec() const { return spec_; }

 private:
  Designer(Kind kind, std::string spec);

  Kind kind_;
  std::string spec_;
  int constant_stars_ = 3;
  RandomSource rng_{0};
  Measure target_ = Measure::kNac;
  bool seen_any_ = false;
  double min_seen_ = 0.0;
  double max_seen_ = 0.0;
};

}  // namespace evodesign
