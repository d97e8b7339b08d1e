#include "evodesign/designer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evodesign {

Designer::Designer(Kind kind, std::string spec) : kind_(kind), spec_(std::move(spec)) {}

Designer Designer::constant(int stars) {
  if (stars < 1 || stars > 5)
    throw std::invalid_argument("constant designer: stars must lie in 1..5");
  Designer d(Kind::kConstant, "constant:" + std::to_string(stars));
  d.constant_stars_ = stars;
  return d;
}

Designer Designer::uniform_random(std::uint64_t seed) {
  Designer d(Kind::kUniformRandom, "random:" + std::to_string(seed));
  d.rng_ = RandomSource(seed);
  return d;
}

Designer Designer::measure_purist(Measure target) {
  Designer d(Kind::kMeasurePurist, "purist:" + std::string(measure_name(target)));
  d.target_ = target;
  return d;
}

Designer Designer::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("designer spec '" + spec +
                                "' must look like kind:parameter");
  const std::string kind = spec.substr(0, colon);
  const std::string parameter = spec.substr(colon + 1);
  try {
    if (kind == "constant") return constant(std::stoi(parameter));
    if (kind == "random") return uniform_random(std::stoull(parameter));
    if (kind == "purist") return measure_purist(measure_from_name(parameter));
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("designer spec '" + spec + "' has a bad parameter");
  }
  throw std::invalid_argument("unknown designer kind '" + kind +
                              "' (expected constant, random or purist)");
}

int Designer::rate(const MetricVector& candidate, Measure /*presented*/) {
  switch (kind_) {
    case Kind::kConstant:
      return constant_stars_;
    case Kind::kUniformRandom:
      return 1 + static_cast<int>(rng_.uniform_index(5));
    case Kind::kMeasurePurist: {
      const double value = candidate.measure_value(target_);
      if (!seen_any_) {
        seen_any_ = true;
        min_seen_ = max_seen_ = value;
        return 3;
      }
      min_seen_ = std::min(min_seen_, value);
      max_seen_ = std::max(max_seen_, value);
      if (max_seen_ == min_seen_) return 3;
      const double normalized = (max_seen_ - value) / (max_seen_ - min_seen_);
      const int stars = 1 + static_cast<int>(std::lround(4.0 * normalized));
      return std::clamp(stars, 1, 5);
    }
  }
  throw std::logic_error("unreachable designer kind");
}

}  // namespace evodesign
