#pragma once

#include <array>
#include <vector>

#include "evodesign/metrics.hpp"

namespace evodesign {

/// Designer feedback accumulated over an episode: per-measure star-rating
/// histories, the running mean rewards they define, and the five selection
/// weights derived from the means. Before any rating every elegance weight is
/// zero and the coupling weight is one.
class RewardState {
 public:
  /// Scale from mean stars (at most 5) to an elegance weight (at most 0.2).
  static constexpr double kRewardScale = 0.04;

  /// Records one star rating (1..5) for a measure and refreshes the derived
  /// means and weights. Out-of-range stars are rejected without touching the
  /// state.
  void add_rating(Measure measure, int stars);

  const std::vector<int>& ratings(Measure measure) const {
    return ratings_[static_cast<int>(measure)];
  }
  /// Arithmetic mean of the ratings received for the measure; 0 when none.
  double mean_reward(Measure measure) const { return mean_[static_cast<int>(measure)]; }
  double weight(Measure measure) const { return weight_[static_cast<int>(measure)]; }
  double coupling_weight() const { return coupling_weight_; }

  std::array<double, kMeasureCount> mean_rewards() const { return mean_; }

  /// Weight row in [w_nac, w_ec, w_iu, w_atmr, w_coupling] order, the layout
  /// used by every log record.
  std::array<double, 5> weights() const;

 private:
  void recompute();

  std::array<std::vector<int>, kMeasureCount> ratings_{};
  std::array<double, kMeasureCount> mean_{};
  std::array<double, kMeasureCount> weight_{};
  double coupling_weight_ = 1.0;
};

}  // namespace evodesign
