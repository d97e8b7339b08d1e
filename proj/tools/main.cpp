#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <glob.h>

#include "CLI11.hpp"

#include "evodesign/errors.hpp"
#include "evodesign/evolution.hpp"
#include "evodesign/problem.hpp"
#include "evodesign/service.hpp"
#include "evodesign/stats.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

/// Replaces every "{seed}" in the pattern; when absent and distinguish is
/// set, appends "-seed<N>" before the extension so batch outputs stay apart.
std::string substitute_seed(const std::string& pattern, std::uint64_t seed,
                            bool distinguish) {
  const std::string token = "{seed}";
  std::string out = pattern;
  bool found = false;
  std::size_t pos = 0;
  while ((pos = out.find(token, pos)) != std::string::npos) {
    out.replace(pos, token.size(), std::to_string(seed));
    found = true;
  }
  if (!found && distinguish) {
    const std::filesystem::path path(out);
    std::filesystem::path renamed = path.parent_path() / path.stem();
    renamed += "-seed" + std::to_string(seed);
    renamed += path.extension();
    out = renamed.string();
  }
  return out;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t results;
  const int rc = ::glob(pattern.c_str(), GLOB_ERR, nullptr, &results);
  std::vector<std::string> paths;
  if (rc == 0)
    for (std::size_t i = 0; i < results.gl_pathc; ++i)
      paths.emplace_back(results.gl_pathv[i]);
  globfree(&results);
  if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed on " + pattern);
  return paths;
}

struct EvolveOptions {
  std::string problem_path;
  int k = 5;
  int pop = 100;
  int max_gen = 1000;
  int interval = 10;
  std::uint64_t seed = 1;
  std::string designer_spec;
  std::string out_pattern;
  std::optional<double> mutation_rate;
  double crossover_rate = 0.9;
  int elitism = 1;
  int batch = 1;
};

int run_evolve(const EvolveOptions& options) {
  evodesign::DesignProblem problem = [&] {
    try {
      return evodesign::load_problem_file(options.problem_path);
    } catch (const std::exception& e) {
      std::cerr << "error: cannot load problem: " << e.what() << "\n";
      std::exit(1);
    }
  }();

  for (int run = 0; run < options.batch; ++run) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(run);
    evodesign::EpisodeConfig config;
    config.population_size = options.pop;
    config.class_count = options.k;
    config.max_generations = options.max_gen;
    config.interaction_interval = options.interval;
    config.mutation_rate = options.mutation_rate;
    config.crossover_rate = options.crossover_rate;
    config.elitism = options.elitism;
    config.seed = seed;

    evodesign::Designer designer =
        evodesign::Designer::parse(substitute_seed(options.designer_spec, seed, false));
    const std::string out_path =
        substitute_seed(options.out_pattern, seed, options.batch > 1);

    try {
      const evodesign::EpisodeLog log =
          evodesign::run_headless(problem, config, std::move(designer));
      evodesign::write_episode_log(log, out_path);
      std::cout << out_path << "\n";
    } catch (const std::ios_base::failure& e) {
      std::cerr << "error: cannot write " << out_path << ": " << e.what() << "\n";
      return 1;
    } catch (const std::runtime_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

struct ServeOptions {
  int port = 0;
  std::string host = "127.0.0.1";
  std::string problems_dir;
  std::string logs_dir = "logs";
  std::string static_dir;
};

int run_serve(const ServeOptions& options) {
  evodesign::ServiceConfig config;
  config.host = options.host;
  config.port = options.port;
  config.problems_dir = options.problems_dir;
  config.logs_dir = options.logs_dir;
  config.static_dir = options.static_dir;
  try {
    evodesign::SessionService service(config);
    const int port = service.start();
    std::cout << "serving on http://" << config.host << ":" << port << "\n";
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

struct AnalyzeOptions {
  std::string logs_glob;
  std::string out_path;
  std::string tsv_path;
};

int run_analyze(const AnalyzeOptions& options) {
  std::vector<std::string> paths;
  try {
    paths = expand_glob(options.logs_glob);
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (paths.empty()) {
    std::cerr << "error: no log files match " << options.logs_glob << "\n";
    return 1;
  }
  std::vector<evodesign::EpisodeLog> logs;
  logs.reserve(paths.size());
  for (const std::string& path : paths) {
    try {
      logs.push_back(evodesign::read_episode_log(path));
    } catch (const std::exception& e) {
      std::cerr << "error: cannot read " << path << ": " << e.what() << "\n";
      return 1;
    }
  }

  const evodesign::CorrelationMatrix matrix = evodesign::correlate_logs(logs);
  const std::string tsv = evodesign::correlation_matrix_tsv(matrix);
  if (options.tsv_path.empty()) {
    std::cout << tsv;
  } else {
    std::ofstream out(options.tsv_path);
    if (!out) {
      std::cerr << "error: cannot write " << options.tsv_path << "\n";
      return 1;
    }
    out << tsv;
  }
  if (!options.out_path.empty()) {
    std::ofstream out(options.out_path);
    if (!out) {
      std::cerr << "error: cannot write " << options.out_path << "\n";
      return 1;
    }
    out << evodesign::correlation_matrix_json(matrix).dump(2) << "\n";
  }
  return 0;
}

struct FixtureOptions {
  std::string scale;
  int attributes = 0;
  int methods = 0;
  int uses = 0;
  std::uint64_t seed = 1;
  std::string name;
  std::string out_path;
};

int run_fixture(const FixtureOptions& options) {
  int a = options.attributes, m = options.methods, u = options.uses;
  std::string name = options.name;
  if (!options.scale.empty()) {
    if (options.scale == "cbs") {
      a = 16; m = 15; u = 39;
    } else if (options.scale == "gdp") {
      a = 43; m = 12; u = 121;
    } else if (options.scale == "sc") {
      a = 52; m = 30; u = 126;
    } else {
      std::cerr << "error: unknown scale '" << options.scale
                << "' (expected cbs, gdp, or sc)\n";
      return 2;
    }
    if (name.empty()) name = options.scale;
  }
  if (a <= 0 || m <= 0 || u <= 0) {
    std::cerr << "error: need --scale or positive --attributes/--methods/--uses\n";
    return 2;
  }
  try {
    const evodesign::DesignProblem problem =
        evodesign::generate_fixture(a, m, u, options.seed, name);
    if (options.out_path.empty()) {
      std::cout << evodesign::save_problem(problem);
    } else {
      evodesign::save_problem_file(problem, options.out_path);
      std::cout << options.out_path << "\n";
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive evolutionary design workbench"};
  app.require_subcommand(1);

  EvolveOptions evolve;
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Run headless episodes to log files");
  evolve_cmd->add_option("--problem", evolve.problem_path, "Problem JSON file")->required();
  evolve_cmd->add_option("--k", evolve.k, "Class count")->required();
  evolve_cmd->add_option("--pop", evolve.pop, "Population size");
  evolve_cmd->add_option("--max-gen", evolve.max_gen, "Generation cap");
  evolve_cmd->add_option("--interval", evolve.interval, "Generations between presentations");
  evolve_cmd->add_option("--seed", evolve.seed, "Base random seed");
  evolve_cmd->add_option("--designer", evolve.designer_spec,
                         "Designer profile: constant:N, random:SEED, purist:MEASURE; "
                         "{seed} expands to the episode seed")
      ->required();
  evolve_cmd->add_option("--out", evolve.out_pattern,
                         "Log path; {seed} expands to the episode seed")
      ->required();
  evolve_cmd->add_option("--mutation-rate", evolve.mutation_rate,
                         "Per-element probability (default 2/elements)");
  evolve_cmd->add_option("--crossover-rate", evolve.crossover_rate, "Crossover probability");
  evolve_cmd->add_option("--elitism", evolve.elitism, "Elites kept by coupling");
  evolve_cmd->add_option("--batch", evolve.batch, "Episodes with seeds seed..seed+N-1")
      ->check(CLI::PositiveNumber);

  ServeOptions serve;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Serve the interactive session API");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks one)");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--problems", serve.problems_dir, "Directory of problem JSON files")
      ->required();
  serve_cmd->add_option("--logs", serve.logs_dir, "Directory for episode logs");
  serve_cmd->add_option("--static", serve.static_dir, "Directory served at /");

  AnalyzeOptions analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Correlate rewards with elegance across logs");
  analyze_cmd->add_option("--logs", analyze.logs_glob, "Glob of episode log files")->required();
  analyze_cmd->add_option("--out", analyze.out_path, "Write the matrix as JSON here");
  analyze_cmd->add_option("--tsv", analyze.tsv_path, "Write the TSV here instead of stdout");

  FixtureOptions fixture;
  CLI::App* fixture_cmd = app.add_subcommand("fixture", "Generate a synthetic problem");
  fixture_cmd->add_option("--scale", fixture.scale, "Preset: cbs, gdp, or sc");
  fixture_cmd->add_option("--attributes", fixture.attributes, "Attribute count");
  fixture_cmd->add_option("--methods", fixture.methods, "Method count");
  fixture_cmd->add_option("--uses", fixture.uses, "Use count");
  fixture_cmd->add_option("--seed", fixture.seed, "Random seed");
  fixture_cmd->add_option("--name", fixture.name, "Problem name");
  fixture_cmd->add_option("--out", fixture.out_path, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(evolve_cmd)) return run_evolve(evolve);
    if (app.got_subcommand(serve_cmd)) return run_serve(serve);
    if (app.got_subcommand(analyze_cmd)) return run_analyze(analyze);
    if (app.got_subcommand(fixture_cmd)) return run_fixture(fixture);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const evodesign::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
