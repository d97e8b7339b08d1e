#include "evodesign/service.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "evodesign/episode_log.hpp"
#include "evodesign/errors.hpp"

namespace evodesign {
namespace {

using nlohmann::json;

EpisodeConfig config_from_json(const json& j) {
  EpisodeConfig config;
  if (!j.is_object()) throw ParseError("config must be an object");
  if (j.contains("population_size")) config.population_size = j.at("population_size").get<int>();
  if (j.contains("class_count")) config.class_count = j.at("class_count").get<int>();
  if (j.contains("max_generations")) config.max_generations = j.at("max_generations").get<int>();
  if (j.contains("mutation_rate") && !j.at("mutation_rate").is_null())
    config.mutation_rate = j.at("mutation_rate").get<double>();
  if (j.contains("crossover_rate")) config.crossover_rate = j.at("crossover_rate").get<double>();
  if (j.contains("elitism")) config.elitism = j.at("elitism").get<int>();
  if (j.contains("interaction_interval"))
    config.interaction_interval = j.at("interaction_interval").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  return config;
}

json config_to_json(const EpisodeConfig& config, double effective_mutation_rate) {
  return json{{"population_size", config.population_size},
              {"class_count", config.class_count},
              {"max_generations", config.max_generations},
              {"mutation_rate", effective_mutation_rate},
              {"crossover_rate", config.crossover_rate},
              {"elitism", config.elitism},
              {"interaction_interval", config.interaction_interval},
              {"seed", config.seed}};
}

/// Interaction record for UI consumption: the chosen measure stays out.
json blinded_interaction_json(const InteractionRecord& record) {
  json j = record_to_json(record);
  j.erase("chosen_measure");
  return j;
}

json candidate_payload(const Presentation& p) {
  return json{{"generation", p.generation},
              {"candidate", p.candidate},
              {"metrics", p.metrics}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

struct SseEvent {
  std::string name;
  std::string data;
};

}  // namespace

/// One live episode: the engine, its worker thread, and the event backlog
/// replayed to stream subscribers. All fields behind `mutex`.
struct Session {
  std::string id;
  std::string problem_name;
  bool headless = false;
  std::optional<Designer> designer;
  std::string log_path;

  std::mutex mutex;
  std::condition_variable cv;
  Episode episode;
  std::vector<SseEvent> events;
  bool halt_requested = false;
  bool worker_done = false;
  std::thread worker;
  std::mutex join_mutex;

  Session(std::string session_id, std::string problem, DesignProblem p, EpisodeConfig c)
      : id(std::move(session_id)), problem_name(std::move(problem)),
        episode(std::move(p), c) {}

  void push_event(std::string name, const json& data) {
    events.push_back(SseEvent{std::move(name), data.dump()});
    cv.notify_all();
  }

  json descriptor() {
    const char* mode = headless ? "headless" : "interactive";
    return json{{"session_id", id},
                {"problem", problem_name},
                {"mode", mode},
                {"status", status_name(episode.status())},
                {"generation", episode.generation()},
                {"config", config_to_json(episode.config(), episode.mutation_rate())},
                {"weights", episode.reward().weights()}};
  }

  /// Worker loop: steps until the cap or a halt request, pausing at
  /// interaction points until the rating handler consumes the pending slot.
  /// Headless sessions rate themselves.
  void run() {
    std::unique_lock<std::mutex> lock(mutex);
    while (!halt_requested && episode.status() != EpisodeStatus::kHalted) {
      if (episode.status() == EpisodeStatus::kAwaitingRating) {
        if (headless) {
          const Presentation& p = *episode.pending();
          const int stars = designer->rate(p.metrics, p.measure);
          episode.apply_rating(stars);
          push_event("interaction", blinded_interaction_json(
                                        *interaction_records(episode.log()).back()));
          continue;
        }
        cv.wait(lock, [this] {
          return halt_requested || episode.status() != EpisodeStatus::kAwaitingRating;
        });
        continue;
      }
      // A step at the cap only performs the halt transition; it appends no
      // generation record, so push nothing here.
      episode.step_generation();
      if (episode.status() == EpisodeStatus::kHalted) continue;
      push_event("generation", record_to_json(*generation_records(episode.log()).back()));
      if (episode.status() == EpisodeStatus::kAwaitingRating && !headless)
        push_event("presentation", candidate_payload(*episode.pending()));
      // Hand the mutex to any waiting handler between generations; long
      // stretches without an interaction point would otherwise block status
      // polls and halt requests until the cap.
      lock.unlock();
      std::this_thread::yield();
      lock.lock();
    }
    if (episode.status() != EpisodeStatus::kHalted) episode.halt();
    push_event("halted", record_to_json(LogRecord(*halt_record(episode.log()))));
    write_episode_log(episode.log(), log_path);
    worker_done = true;
    cv.notify_all();
  }

  /// Blocks until the worker has halted and persisted the log.
  void finish() {
    {
      std::lock_guard<std::mutex> lock(mutex);
      halt_requested = true;
      cv.notify_all();
    }
    std::lock_guard<std::mutex> lock(join_mutex);
    if (worker.joinable()) worker.join();
  }
};

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  server_ = std::make_unique<httplib::Server>();
  token_salt_ = std::random_device{}();
  if (!config_.problems_dir.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(config_.problems_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) add_problem(load_problem_file(file.string()));
  }
  register_routes();
}

SessionService::~SessionService() { stop(); }

void SessionService::add_problem(DesignProblem problem) {
  std::string name = problem.name();
  problems_.insert_or_assign(std::move(name), std::move(problem));
}

std::vector<std::string> SessionService::problem_names() const {
  std::vector<std::string> names;
  names.reserve(problems_.size());
  for (const auto& [name, problem] : problems_) names.push_back(name);
  return names;
}

int SessionService::start() {
  std::filesystem::create_directories(config_.logs_dir);
  if (!config_.static_dir.empty()) server_->set_mount_point("/", config_.static_dir);
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
  } else {
    if (!server_->bind_to_port(config_.host, config_.port))
      throw std::runtime_error("cannot bind to port " + std::to_string(config_.port));
    port_ = config_.port;
  }
  listen_thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void SessionService::stop() {
  {
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    for (auto& [id, session] : sessions_) session->finish();
  }
  if (server_ && server_->is_running()) server_->stop();
  if (listen_thread_.joinable()) listen_thread_.join();
}

Session* SessionService::find_session(const std::string& id) {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second.get();
}

void SessionService::register_routes() {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server_->Get("/problems", [this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& [name, problem] : problems_)
      list.push_back(json{{"name", name},
                          {"attributes", problem.attribute_count()},
                          {"methods", problem.method_count()},
                          {"uses", problem.use_count()}});
    send_json(res, 200, json{{"problems", list}});
  });

  server_->Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!body.is_object() || !body.contains("problem"))
        return send_error(res, 400, "request must name a problem");
      const std::string problem_name = body.at("problem").get<std::string>();
      const auto it = problems_.find(problem_name);
      if (it == problems_.end())
        return send_error(res, 404, "unknown problem '" + problem_name + "'");
      EpisodeConfig config;
      if (body.contains("config")) config = config_from_json(body.at("config"));

      std::ostringstream id_stream;
      std::uint64_t sequence = 0;
      {
        std::lock_guard<std::mutex> lock(sessions_mutex_);
        sequence = next_session_++;
      }
      id_stream << "s" << sequence << "-" << std::hex
                << (token_salt_ ^ (sequence * 0x9e3779b97f4a7c15ull));
      auto session = std::make_unique<Session>(id_stream.str(), problem_name,
                                               it->second, config);
      if (body.contains("designer") && !body.at("designer").is_null()) {
        session->designer = Designer::parse(body.at("designer").get<std::string>());
        session->headless = true;
      }
      session->log_path = (std::filesystem::path(config_.logs_dir) /
                           (session->id + ".jsonl")).string();

      Session* raw = session.get();
      {
        std::lock_guard<std::mutex> lock(sessions_mutex_);
        sessions_.emplace(raw->id, std::move(session));
      }
      raw->worker = std::thread([raw] { raw->run(); });
      json descriptor;
      {
        std::lock_guard<std::mutex> lock(raw->mutex);
        descriptor = raw->descriptor();
      }
      send_json(res, 201, descriptor);
    } catch (const ParseError& e) {
      send_error(res, 400, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("bad request body: ") + e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, e.what());
    }
  });

  server_->Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req,
                                              httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    std::lock_guard<std::mutex> lock(session->mutex);
    send_json(res, 200, session->descriptor());
  });

  server_->Get(R"(/sessions/([^/]+)/candidate)", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    std::lock_guard<std::mutex> lock(session->mutex);
    if (!session->episode.pending())
      return send_error(res, 404, "no candidate is awaiting a rating");
    send_json(res, 200, candidate_payload(*session->episode.pending()));
  });

  server_->Post(R"(/sessions/([^/]+)/rating)", [this](const httplib::Request& req,
                                                      httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object() || !body.contains("stars") ||
        !body.at("stars").is_number_integer())
      return send_error(res, 400, "body must carry integer 'stars'");
    const int stars = body.at("stars").get<int>();

    std::lock_guard<std::mutex> lock(session->mutex);
    try {
      session->episode.apply_rating(stars);
    } catch (const ProtocolError& e) {
      return send_error(res, 409, e.what());
    } catch (const std::invalid_argument& e) {
      return send_error(res, 400, e.what());
    }
    session->push_event("interaction", blinded_interaction_json(
                                           *interaction_records(session->episode.log()).back()));
    session->cv.notify_all();
    send_json(res, 200,
              json{{"status", status_name(session->episode.status())},
                   {"weights", session->episode.reward().weights()},
                   {"mean_rewards", session->episode.reward().mean_rewards()}});
  });

  server_->Post(R"(/sessions/([^/]+)/halt)", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    session->finish();
    std::lock_guard<std::mutex> lock(session->mutex);
    res.status = 200;
    res.set_content(to_jsonl(session->episode.log()), "application/x-ndjson");
  });

  server_->Get(R"(/sessions/([^/]+)/history)", [this](const httplib::Request& req,
                                                      httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    std::lock_guard<std::mutex> lock(session->mutex);
    json generations = json::array();
    for (const GenerationRecord* record : generation_records(session->episode.log()))
      generations.push_back(record_to_json(*record));
    json interactions = json::array();
    for (const InteractionRecord* record : interaction_records(session->episode.log()))
      interactions.push_back(blinded_interaction_json(*record));
    send_json(res, 200,
              json{{"status", status_name(session->episode.status())},
                   {"generations", generations},
                   {"interactions", interactions}});
  });

  server_->Get(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req,
                                                     httplib::Response& res) {
    Session* session = find_session(req.matches[1]);
    if (!session) return send_error(res, 404, "unknown session");
    res.set_chunked_content_provider(
        "text/event-stream", [session](std::size_t, httplib::DataSink& sink) {
          std::unique_lock<std::mutex> lock(session->mutex);
          std::size_t next = 0;
          for (;;) {
            session->cv.wait_for(lock, std::chrono::milliseconds(250), [&] {
              return next < session->events.size() || session->worker_done;
            });
            while (next < session->events.size()) {
              const SseEvent& event = session->events[next];
              std::string frame = "id: " + std::to_string(next + 1) + "\nevent: " +
                                  event.name + "\ndata: " + event.data + "\n\n";
              ++next;
              lock.unlock();
              const bool ok = sink.write(frame.data(), frame.size());
              lock.lock();
              if (!ok) return false;
            }
            if (session->worker_done && next >= session->events.size()) {
              lock.unlock();
              sink.done();
              return true;
            }
            if (!sink.is_writable()) return false;
          }
        });
  });
}

}  // namespace evodesign
