#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "evodesign/metrics.hpp"

namespace evodesign {

/// Population snapshot after one generation. best and mean are per-metric
/// over the population; weights are [w_nac, w_ec, w_iu, w_atmr, w_coupling].
struct GenerationRecord {
  int gen = 0;
  MetricVector best;
  MetricVector mean;
  std::array<double, 5> weights{};
};

/// One designer interaction: the presented candidate, the rating it drew,
/// and the reward state after the update. chosen_measure is recorded here
/// but never shown to the designer.
struct InteractionRecord {
  int generation = 0;
  Measure chosen_measure = Measure::kNac;
  nlohmann::json candidate;
  MetricVector candidate_metrics;
  int stars = 0;
  std::array<double, kMeasureCount> mean_rewards_after{};
  std::array<double, 5> weights_after{};
};

struct HaltRecord {
  int gen = 0;
  MetricVector best;
  MetricVector mean;
  std::array<double, 5> weights{};
};

using LogRecord = std::variant<GenerationRecord, InteractionRecord, HaltRecord>;

/// Append-only episode record, serialized as JSON lines.
struct EpisodeLog {
  std::vector<LogRecord> records;
};

nlohmann::json record_to_json(const LogRecord& record);
LogRecord record_from_json(const nlohmann::json& j);

std::string to_jsonl(const EpisodeLog& log);
EpisodeLog episode_log_from_jsonl(std::istream& in);

void write_episode_log(const EpisodeLog& log, const std::string& path);
EpisodeLog read_episode_log(const std::string& path);

std::vector<const GenerationRecord*> generation_records(const EpisodeLog& log);
std::vector<const InteractionRecord*> interaction_records(const EpisodeLog& log);
std::optional<HaltRecord> halt_record(const EpisodeLog& log);

}  // namespace evodesign
