#include "evodesign/reward.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace evodesign {

void RewardState::add_rating(Measure measure, int stars) {
  if (stars < 1 || stars > 5)
    throw std::invalid_argument("star rating must lie in 1..5, got " +
                                std::to_string(stars));
  ratings_[static_cast<int>(measure)].push_back(stars);
  recompute();
}

void RewardState::recompute() {
  for (int i = 0; i < kMeasureCount; ++i) {
    if (ratings_[i].empty()) {
      mean_[i] = 0.0;
      weight_[i] = 0.0;
      continue;
    }
    long long sum = 0;
    for (const int stars : ratings_[i]) sum += stars;
    mean_[i] = static_cast<double>(sum) / static_cast<double>(ratings_[i].size());
    weight_[i] = mean_[i] * kRewardScale;
  }
  // The four-term sum can exceed 0.8 by an ulp; the clamp keeps the coupling
  // weight on its mathematical range [0.2, 1].
  const double elegance_sum = weight_[0] + weight_[1] + weight_[2] + weight_[3];
  coupling_weight_ = std::clamp(1.0 - elegance_sum, 0.2, 1.0);
}

std::array<double, 5> RewardState::weights() const {
  return {weight_[0], weight_[1], weight_[2], weight_[3], coupling_weight_};
}

}  // namespace evodesign
