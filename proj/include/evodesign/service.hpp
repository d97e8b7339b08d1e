#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "evodesign/evolution.hpp"
#include "evodesign/problem.hpp"

namespace httplib {
class Server;
}

namespace evodesign {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port; start() reports the real one
  std::string problems_dir;
  std::string logs_dir = "logs";
  std::string static_dir;  // optional UI mount at /
};

struct Session;

/// Local HTTP front end for interactive episodes. Each session runs its
/// episode on a worker thread that pauses at interaction points; ratings and
/// halts arrive over HTTP and are serialized through the session mutex.
/// Candidate payloads, history, and events never carry the selecting
/// measure; the persisted log does.
class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  /// Registers a problem under its own name (problems_dir files are loaded
  /// by the constructor; this exists for tests and embedding).
  void add_problem(DesignProblem problem);

  /// Binds and serves on a background thread; returns the bound port.
  int start();

  /// Halts every session, joins workers, and stops the server.
  void stop();

  int port() const { return port_; }
  std::vector<std::string> problem_names() const;

 private:
  void register_routes();
  Session* find_session(const std::string& id);

  ServiceConfig config_;
  std::map<std::string, DesignProblem> problems_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  mutable std::mutex sessions_mutex_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listen_thread_;
  int port_ = 0;
  std::uint64_t next_session_ = 1;
  std::uint64_t token_salt_ = 0;
};

}  // namespace evodesign
