#include "evodesign/evolution.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>

#include "evodesign/errors.hpp"

namespace evodesign {
namespace {

void check_config(const EpisodeConfig& config, const DesignProblem& problem) {
  if (config.population_size < 2)
    throw std::invalid_argument("population_size must be at least 2");
  if (config.class_count < 2)
    throw std::invalid_argument("class_count must be at least 2");
  if (config.class_count > problem.element_count())
    throw std::invalid_argument("class_count exceeds the number of elements");
  if (config.max_generations < 1)
    throw std::invalid_argument("max_generations must be at least 1");
  if (config.mutation_rate && (*config.mutation_rate < 0.0 || *config.mutation_rate > 1.0))
    throw std::invalid_argument("mutation_rate must lie in [0, 1]");
  if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0)
    throw std::invalid_argument("crossover_rate must lie in [0, 1]");
  if (config.elitism < 0 || config.elitism >= config.population_size)
    throw std::invalid_argument("elitism must lie in [0, population_size)");
  if (config.interaction_interval < 1)
    throw std::invalid_argument("interaction_interval must be at least 1");
}

}  // namespace

std::string_view status_name(EpisodeStatus status) {
  switch (status) {
    case EpisodeStatus::kRunning: return "running";
    case EpisodeStatus::kAwaitingRating: return "awaiting_rating";
    case EpisodeStatus::kHalted: return "halted";
  }
  return "unknown";
}

std::size_t select_parent(const std::vector<Individual>& population,
                          const RewardState& reward, RandomSource& rng) {
  if (population.empty()) throw std::invalid_argument("select_parent: empty population");
  if (population.size() == 1) return 0;

  // Objective probabilities, coupling first: {w_c, w_nac, w_ec, w_iu, w_atmr}.
  const auto w = reward.weights();
  const std::array<double, 5> prob = {w[4], w[0], w[1], w[2], w[3]};
  const double u = rng.uniform_real01();
  Objective objective = Objective::kAtmr;
  double cum = 0.0;
  for (int i = 0; i < 5; ++i) {
    cum += prob[static_cast<std::size_t>(i)];
    if (u < cum) {
      objective = static_cast<Objective>(i);
      break;
    }
  }

  const std::size_t i = rng.uniform_index(population.size());
  std::size_t j = rng.uniform_index(population.size() - 1);
  if (j >= i) ++j;

  const double vi = population[i].metrics.objective_value(objective);
  const double vj = population[j].metrics.objective_value(objective);
  if (vi < vj) return i;
  if (vj < vi) return j;
  return rng.bernoulli(0.5) ? i : j;
}

std::size_t pick_most_elegant(const std::vector<Individual>& population, Measure measure) {
  if (population.empty()) throw std::invalid_argument("pick_most_elegant: empty population");
  std::size_t best = 0;
  double best_value = population[0].metrics.measure_value(measure);
  for (std::size_t idx = 1; idx < population.size(); ++idx) {
    const double value = population[idx].metrics.measure_value(measure);
    if (value < best_value) {
      best = idx;
      best_value = value;
    }
  }
  return best;
}

Episode::Episode(DesignProblem problem, EpisodeConfig config)
    : problem_(std::move(problem)),
      config_(config),
      mutation_rate_(config.mutation_rate
                         ? *config.mutation_rate
                         : 2.0 / static_cast<double>(problem_.element_count())),
      rng_(config.seed) {
  check_config(config_, problem_);
  mutation_rate_ = std::min(mutation_rate_, 1.0);
  population_.reserve(static_cast<std::size_t>(config_.population_size));
  for (int i = 0; i < config_.population_size; ++i) {
    DesignSolution solution = random_solution(problem_, config_.class_count, rng_);
    MetricVector metrics = evaluate(problem_, solution);
    population_.push_back(Individual{std::move(solution), metrics});
  }
}

EpisodeStatus Episode::status() const {
  if (halted_) return EpisodeStatus::kHalted;
  if (pending_) return EpisodeStatus::kAwaitingRating;
  return EpisodeStatus::kRunning;
}

MetricVector Episode::best_metrics() const {
  MetricVector best = population_.front().metrics;
  for (const Individual& ind : population_) {
    best.coupling = std::min(best.coupling, ind.metrics.coupling);
    best.nac = std::min(best.nac, ind.metrics.nac);
    best.ec = std::min(best.ec, ind.metrics.ec);
    best.iu = std::min(best.iu, ind.metrics.iu);
    best.atmr = std::min(best.atmr, ind.metrics.atmr);
  }
  return best;
}

MetricVector Episode::mean_metrics() const {
  MetricVector sum{};
  for (const Individual& ind : population_) {
    sum.coupling += ind.metrics.coupling;
    sum.nac += ind.metrics.nac;
    sum.ec += ind.metrics.ec;
    sum.iu += ind.metrics.iu;
    sum.atmr += ind.metrics.atmr;
  }
  const double n = static_cast<double>(population_.size());
  sum.coupling /= n;
  sum.nac /= n;
  sum.ec /= n;
  sum.iu /= n;
  sum.atmr /= n;
  return sum;
}

void Episode::step_generation() {
  if (halted_) throw ProtocolError("cannot step a halted episode");
  if (pending_) throw ProtocolError("cannot step while a rating is pending");
  if (generation_ >= config_.max_generations) {
    do_halt();
    return;
  }

  // Elites by coupling, lowest population index wins ties.
  std::vector<std::size_t> order(population_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return population_[a].metrics.coupling < population_[b].metrics.coupling;
  });

  std::vector<Individual> next;
  next.reserve(population_.size());
  for (int e = 0; e < config_.elitism; ++e)
    next.push_back(population_[order[static_cast<std::size_t>(e)]]);

  while (next.size() < population_.size()) {
    const std::size_t a = select_parent(population_, reward_, rng_);
    const std::size_t b = select_parent(population_, reward_, rng_);
    DesignSolution child = rng_.bernoulli(config_.crossover_rate)
                               ? crossover(problem_, population_[a].solution,
                                           population_[b].solution, rng_)
                               : population_[a].solution;
    child = mutate(problem_, child, mutation_rate_, rng_);
    MetricVector metrics = evaluate(problem_, child);
    next.push_back(Individual{std::move(child), metrics});
  }
  population_ = std::move(next);
  ++generation_;

  GenerationRecord record;
  record.gen = generation_;
  record.best = best_metrics();
  record.mean = mean_metrics();
  record.weights = reward_.weights();
  log_.records.push_back(record);

  if (generation_ % config_.interaction_interval == 0) present_candidate();
}

const Presentation& Episode::present_candidate() {
  if (halted_) throw ProtocolError("cannot present on a halted episode");
  if (pending_) throw ProtocolError("a presentation is already awaiting its rating");

  const auto measure = static_cast<Measure>(rng_.uniform_index(kMeasureCount));
  const std::size_t index = pick_most_elegant(population_, measure);

  Presentation p;
  p.generation = generation_;
  p.measure = measure;
  p.population_index = static_cast<int>(index);
  p.candidate = solution_to_json(problem_, population_[index].solution);
  p.metrics = population_[index].metrics;
  pending_ = std::move(p);
  return *pending_;
}

void Episode::apply_rating(int stars) {
  if (!pending_) throw ProtocolError("no presentation is awaiting a rating");
  if (stars < 1 || stars > 5)
    throw std::invalid_argument("stars must lie in 1..5");

  const Presentation p = std::move(*pending_);
  reward_.add_rating(p.measure, stars);

  InteractionRecord record;
  record.generation = p.generation;
  record.chosen_measure = p.measure;
  record.candidate = p.candidate;
  record.candidate_metrics = p.metrics;
  record.stars = stars;
  record.mean_rewards_after = reward_.mean_rewards();
  record.weights_after = reward_.weights();
  log_.records.push_back(std::move(record));
  pending_.reset();
}

const EpisodeLog& Episode::halt() {
  if (halted_) throw ProtocolError("episode already halted");
  do_halt();
  return log_;
}

void Episode::do_halt() {
  pending_.reset();
  HaltRecord record;
  record.gen = generation_;
  record.best = best_metrics();
  record.mean = mean_metrics();
  record.weights = reward_.weights();
  log_.records.push_back(record);
  halted_ = true;
}

EpisodeLog run_headless(const DesignProblem& problem, const EpisodeConfig& config,
                        Designer designer) {
  Episode episode(problem, config);
  while (episode.status() != EpisodeStatus::kHalted) {
    if (episode.status() == EpisodeStatus::kAwaitingRating) {
      const Presentation& p = *episode.pending();
      episode.apply_rating(designer.rate(p.metrics, p.measure));
    } else {
      episode.step_generation();
    }
  }
  return episode.log();
}

}  // namespace evodesign
