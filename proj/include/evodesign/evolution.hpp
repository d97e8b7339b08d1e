#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evodesign/designer.hpp"
#include "evodesign/episode_log.hpp"
#include "evodesign/genome.hpp"
#include "evodesign/metrics.hpp"
#include "evodesign/random.hpp"
#include "evodesign/reward.hpp"

namespace evodesign {

/// Per-run settings. mutation_rate defaults to 2 / element count of the
/// bound problem when left unset.
struct EpisodeConfig {
  int population_size = 100;
  int class_count = 5;
  int max_generations = 1000;
  std::optional<double> mutation_rate;
  double crossover_rate = 0.9;
  int elitism = 1;
  int interaction_interval = 10;
  std::uint64_t seed = 1;
};

struct Individual {
  DesignSolution solution;
  MetricVector metrics;
};

/// What sits in the pending-rating slot: the candidate shown to the designer
/// plus the measure that selected it. The measure goes to the log only,
/// never to the designer.
struct Presentation {
  int generation = 0;
  Measure measure = Measure::kNac;
  int population_index = 0;
  nlohmann::json candidate;
  MetricVector metrics;
};

enum class EpisodeStatus { kRunning, kAwaitingRating, kHalted };

std::string_view status_name(EpisodeStatus status);

/// Reward-weighted binary tournament: draws one objective with probabilities
/// {w_coupling, w_nac, w_ec, w_iu, w_atmr}, then two distinct uniform
/// individuals, and returns the index of the one with the lower value of the
/// drawn objective (ties decided by a fair coin). A single-individual
/// population returns that individual.
std::size_t select_parent(const std::vector<Individual>& population,
                          const RewardState& reward, RandomSource& rng);

/// Index of the individual minimizing the measure; ties break toward the
/// lowest population index.
std::size_t pick_most_elegant(const std::vector<Individual>& population, Measure measure);

/// One interactive design episode: population, reward state, log, and the
/// pending-presentation slot. All operations funnel through one random
/// stream, so (problem, config, rating sequence) determines the log bytes.
class Episode {
 public:
  Episode(DesignProblem problem, EpisodeConfig config);

  EpisodeStatus status() const;
  int generation() const { return generation_; }
  const DesignProblem& problem() const { return problem_; }
  const EpisodeConfig& config() const { return config_; }
  double mutation_rate() const { return mutation_rate_; }
  const std::vector<Individual>& population() const { return population_; }
  const RewardState& reward() const { return reward_; }
  const EpisodeLog& log() const { return log_; }
  const std::optional<Presentation>& pending() const { return pending_; }

  /// Produces the next generation (elites by coupling, then tournament /
  /// crossover / mutation) and appends a generation record. Lands on an
  /// interaction point -> presents a candidate and blocks further stepping
  /// until the rating is consumed. Stepping at the generation cap halts the
  /// episode instead.
  void step_generation();

  /// Draws an elegance measure uniformly and fills the pending slot with the
  /// population's most elegant individual under it.
  const Presentation& present_candidate();

  /// Consumes the pending presentation: records the stars against the chosen
  /// measure, refreshes rewards and weights, and appends an interaction
  /// record. Out-of-range stars leave the state untouched.
  void apply_rating(int stars);

  /// Closes the log with a final population summary.
  const EpisodeLog& halt();

 private:
  void do_halt();
  MetricVector best_metrics() const;
  MetricVector mean_metrics() const;

  DesignProblem problem_;
  EpisodeConfig config_;
  double mutation_rate_;
  RandomSource rng_;
  std::vector<Individual> population_;
  RewardState reward_;
  EpisodeLog log_;
  std::optional<Presentation> pending_;
  int generation_ = 0;
  bool halted_ = false;
};

/// Runs a full episode against a simulated designer: steps to the generation
/// cap, rating every presentation through the profile. The returned log is a
/// pure function of (problem, config, profile).
EpisodeLog run_headless(const DesignProblem& problem, const EpisodeConfig& config,
                        Designer designer);

}  // namespace evodesign
