#include "evodesign/episode_log.hpp"

#include <fstream>
#include <sstream>

#include "evodesign/errors.hpp"

namespace evodesign {

using nlohmann::json;

namespace {

json weights_to_json(const std::array<double, 5>& weights) {
  return json(weights);
}

template <std::size_t N>
std::array<double, N> weights_from_json(const json& j) {
  if (!j.is_array() || j.size() != N)
    throw ParseError("log record: expected an array of " + std::to_string(N) + " weights");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = j[i].get<double>();
  return out;
}

}  // namespace

json record_to_json(const LogRecord& record) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, GenerationRecord>) {
          return json{{"kind", "generation"},
                      {"gen", r.gen},
                      {"best", r.best},
                      {"mean", r.mean},
                      {"weights", weights_to_json(r.weights)}};
        } else if constexpr (std::is_same_v<T, InteractionRecord>) {
          return json{{"kind", "interaction"},
                      {"generation", r.generation},
                      {"chosen_measure", measure_name(r.chosen_measure)},
                      {"candidate", r.candidate},
                      {"candidate_metrics", r.candidate_metrics},
                      {"stars", r.stars},
                      {"mean_rewards_after", json(r.mean_rewards_after)},
                      {"weights_after", weights_to_json(r.weights_after)}};
        } else {
          return json{{"kind", "halt"},
                      {"gen", r.gen},
                      {"final_population_summary",
                       json{{"best", r.best},
                            {"mean", r.mean},
                            {"weights", weights_to_json(r.weights)}}}};
        }
      },
      record);
}

LogRecord record_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ParseError("log record: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "generation") {
    GenerationRecord r;
    r.gen = j.at("gen").get<int>();
    r.best = j.at("best").get<MetricVector>();
    r.mean = j.at("mean").get<MetricVector>();
    r.weights = weights_from_json<5>(j.at("weights"));
    return r;
  }
  if (kind == "interaction") {
    InteractionRecord r;
    r.generation = j.at("generation").get<int>();
    r.chosen_measure = measure_from_name(j.at("chosen_measure").get<std::string>());
    r.candidate = j.at("candidate");
    r.candidate_metrics = j.at("candidate_metrics").get<MetricVector>();
    r.stars = j.at("stars").get<int>();
    r.mean_rewards_after = weights_from_json<4>(j.at("mean_rewards_after"));
    r.weights_after = weights_from_json<5>(j.at("weights_after"));
    return r;
  }
  if (kind == "halt") {
    HaltRecord r;
    r.gen = j.at("gen").get<int>();
    const json& summary = j.at("final_population_summary");
    r.best = summary.at("best").get<MetricVector>();
    r.mean = summary.at("mean").get<MetricVector>();
    r.weights = weights_from_json<5>(summary.at("weights"));
    return r;
  }
  throw ParseError("log record: unknown kind '" + kind + "'");
}

std::string to_jsonl(const EpisodeLog& log) {
  std::string out;
  for (const auto& record : log.records) {
    out += record_to_json(record).dump();
    out += '\n';
  }
  return out;
}

EpisodeLog episode_log_from_jsonl(std::istream& in) {
  EpisodeLog log;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      log.records.push_back(record_from_json(json::parse(line)));
    } catch (const ParseError& e) {
      throw ParseError("log line " + std::to_string(line_number) + ": " + e.what());
    } catch (const json::exception& e) {
      throw ParseError("log line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return log;
}

void write_episode_log(const EpisodeLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write episode log: " + path);
  out << to_jsonl(log);
  if (!out) throw std::runtime_error("failed writing episode log: " + path);
}

EpisodeLog read_episode_log(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open episode log: " + path);
  return episode_log_from_jsonl(in);
}

std::vector<const GenerationRecord*> generation_records(const EpisodeLog& log) {
  std::vector<const GenerationRecord*> out;
  for (const auto& record : log.records)
    if (const auto* r = std::get_if<GenerationRecord>(&record)) out.push_back(r);
  return out;
}

std::vector<const InteractionRecord*> interaction_records(const EpisodeLog& log) {
  std::vector<const InteractionRecord*> out;
  for (const auto& record : log.records)
    if (const auto* r = std::get_if<InteractionRecord>(&record)) out.push_back(r);
  return out;
}

std::optional<HaltRecord> halt_record(const EpisodeLog& log) {
  for (const auto& record : log.records)
    if (const auto* r = std::get_if<HaltRecord>(&record)) return *r;
  return std::nullopt;
}

}  // namespace evodesign
