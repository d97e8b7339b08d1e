#include "evodesign/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "evodesign/errors.hpp"
#include "evodesign/random.hpp"

namespace evodesign {

using nlohmann::json;

DesignProblem::DesignProblem(std::string name, std::vector<std::string> attributes,
                             std::vector<std::string> methods,
                             std::vector<std::pair<std::string, std::string>> uses)
    : name_(std::move(name)),
      attributes_(std::move(attributes)),
      methods_(std::move(methods)) {
  if (attributes_.empty()) throw ValidationError("problem has no attributes");
  if (methods_.empty()) throw ValidationError("problem has no methods");
  if (uses.empty()) throw ValidationError("problem has no uses");

  std::unordered_map<std::string, int> attribute_index;
  std::unordered_map<std::string, int> method_index;
  for (int i = 0; i < attribute_count(); ++i) {
    if (!attribute_index.emplace(attributes_[i], i).second)
      throw ValidationError("duplicate attribute '" + attributes_[i] + "'");
  }
  for (int i = 0; i < method_count(); ++i) {
    if (attribute_index.count(methods_[i]))
      throw ValidationError("identifier '" + methods_[i] +
                            "' appears as both attribute and method");
    if (!method_index.emplace(methods_[i], i).second)
      throw ValidationError("duplicate method '" + methods_[i] + "'");
  }

  uses_.reserve(uses.size());
  std::unordered_set<std::int64_t> seen;
  for (const auto& [method, attribute] : uses) {
    auto m = method_index.find(method);
    if (m == method_index.end())
      throw ValidationError("use references unknown method '" + method + "'");
    auto a = attribute_index.find(attribute);
    if (a == attribute_index.end())
      throw ValidationError("use references unknown attribute '" + attribute + "'");
    const std::int64_t key =
        static_cast<std::int64_t>(m->second) * attribute_count() + a->second;
    if (!seen.insert(key).second)
      throw ValidationError("duplicate use (" + method + ", " + attribute + ")");
    uses_.emplace_back(m->second, a->second);
  }
}

const std::string& DesignProblem::element_name(int element) const {
  return element_is_attribute(element) ? attributes_[element]
                                       : methods_[element - attribute_count()];
}

namespace {

std::vector<std::string> string_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ParseError(std::string("problem file: \"") + key +
                     "\" must be an array of strings");
  std::vector<std::string> out;
  out.reserve(j.at(key).size());
  for (const auto& item : j.at(key)) {
    if (!item.is_string())
      throw ParseError(std::string("problem file: \"") + key +
                       "\" must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

DesignProblem problem_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("problem file: top level must be an object");
  if (!j.contains("name") || !j.at("name").is_string())
    throw ParseError("problem file: \"name\" must be a string");

  std::vector<std::pair<std::string, std::string>> uses;
  if (!j.contains("uses") || !j.at("uses").is_array())
    throw ParseError("problem file: \"uses\" must be an array of [method, attribute] pairs");
  for (const auto& pair : j.at("uses")) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
      throw ParseError("problem file: each use must be a [method, attribute] string pair");
    uses.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
  }

  return DesignProblem(j.at("name").get<std::string>(), string_array(j, "attributes"),
                       string_array(j, "methods"), std::move(uses));
}

}  // namespace

DesignProblem load_problem(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  return problem_from_json(j);
}

DesignProblem load_problem(const std::string& text) {
  std::istringstream in(text);
  return load_problem(in);
}

DesignProblem load_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return load_problem(in);
}

std::string save_problem(const DesignProblem& problem) {
  json j;
  j["name"] = problem.name();
  j["attributes"] = problem.attributes();
  j["methods"] = problem.methods();
  json uses = json::array();
  for (const auto& [m, a] : problem.uses())
    uses.push_back(json::array({problem.methods()[m], problem.attributes()[a]}));
  j["uses"] = std::move(uses);
  return j.dump(2) + "\n";
}

void save_problem_file(const DesignProblem& problem, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write problem file: " + path);
  out << save_problem(problem);
}

DesignProblem generate_fixture(int n_attributes, int n_methods, int n_uses,
                               std::uint64_t seed, std::string name) {
  if (n_attributes < 1 || n_methods < 1 || n_uses < 1)
    throw std::invalid_argument("generate_fixture: all counts must be positive");
  const std::int64_t grid =
      static_cast<std::int64_t>(n_attributes) * static_cast<std::int64_t>(n_methods);
  if (n_uses > grid)
    throw std::invalid_argument("generate_fixture: n_uses exceeds attribute x method grid (" +
                                std::to_string(n_uses) + " > " + std::to_string(grid) + ")");

  std::vector<std::string> attributes(n_attributes);
  for (int i = 0; i < n_attributes; ++i) attributes[i] = "a" + std::to_string(i + 1);
  std::vector<std::string> methods(n_methods);
  for (int i = 0; i < n_methods; ++i) methods[i] = "m" + std::to_string(i + 1);

  // Real design problems have modular use structure: most uses sit inside a
  // cohesive functional cluster (a manually designed CBS keeps ~85% of uses
  // internal). The fixture plants unevenly sized latent clusters, assigns
  // elements to them in contiguous runs, and samples uses without
  // replacement with an intra-cluster bias. When n_uses fills the grid the
  // result is the complete bipartite set regardless of seed.
  RandomSource rng(seed);
  const int elements = n_attributes + n_methods;
  const int clusters = std::max(
      2, std::min(static_cast<int>(std::llround(std::sqrt(double(elements)))), elements));

  std::vector<double> weight(static_cast<std::size_t>(clusters));
  double weight_sum = 0.0;
  for (double& w : weight) {
    w = 1.0 + 2.0 * rng.uniform_real01();
    weight_sum += w;
  }
  // Largest-remainder allocation of a count across clusters by weight.
  const auto allocate = [&](int total) {
    std::vector<int> share(static_cast<std::size_t>(clusters), 0);
    std::vector<std::pair<double, int>> remainder;
    int assigned = 0;
    for (int c = 0; c < clusters; ++c) {
      const double quota = total * weight[static_cast<std::size_t>(c)] / weight_sum;
      share[static_cast<std::size_t>(c)] = static_cast<int>(quota);
      assigned += share[static_cast<std::size_t>(c)];
      remainder.emplace_back(quota - std::floor(quota), c);
    }
    std::stable_sort(remainder.begin(), remainder.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (int i = 0; i < total - assigned; ++i)
      ++share[static_cast<std::size_t>(remainder[static_cast<std::size_t>(i)].second)];
    return share;
  };
  const std::vector<int> attr_share = allocate(n_attributes);
  const std::vector<int> method_share = allocate(n_methods);

  // Cluster of each attribute / method, in contiguous runs.
  std::vector<int> attr_cluster(static_cast<std::size_t>(n_attributes));
  std::vector<int> method_cluster(static_cast<std::size_t>(n_methods));
  for (int c = 0, next = 0; c < clusters; ++c)
    for (int i = 0; i < attr_share[static_cast<std::size_t>(c)]; ++i)
      attr_cluster[static_cast<std::size_t>(next++)] = c;
  for (int c = 0, next = 0; c < clusters; ++c)
    for (int i = 0; i < method_share[static_cast<std::size_t>(c)]; ++i)
      method_cluster[static_cast<std::size_t>(next++)] = c;

  std::vector<std::int64_t> intra_pool;
  std::vector<std::int64_t> inter_pool;
  for (std::int64_t id = 0; id < grid; ++id) {
    const int m = static_cast<int>(id / n_attributes);
    const int a = static_cast<int>(id % n_attributes);
    (method_cluster[static_cast<std::size_t>(m)] == attr_cluster[static_cast<std::size_t>(a)]
         ? intra_pool
         : inter_pool)
        .push_back(id);
  }

  int n_intra = static_cast<int>(std::min<std::int64_t>(
      std::llround(0.8 * n_uses), static_cast<std::int64_t>(intra_pool.size())));
  if (n_uses - n_intra > static_cast<std::int64_t>(inter_pool.size()))
    n_intra = n_uses - static_cast<int>(inter_pool.size());
  const int n_inter = n_uses - n_intra;

  const auto sample = [&rng](std::vector<std::int64_t>& pool, int count) {
    for (int i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_index(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    return std::vector<std::int64_t>(pool.begin(), pool.begin() + count);
  };
  std::vector<std::int64_t> chosen = sample(intra_pool, n_intra);
  const std::vector<std::int64_t> inter_chosen = sample(inter_pool, n_inter);
  chosen.insert(chosen.end(), inter_chosen.begin(), inter_chosen.end());
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::pair<std::string, std::string>> uses;
  uses.reserve(chosen.size());
  for (const std::int64_t id : chosen) {
    const int m = static_cast<int>(id / n_attributes);
    const int a = static_cast<int>(id % n_attributes);
    uses.emplace_back(methods[m], attributes[a]);
  }

  if (name.empty())
    name = "synthetic-" + std::to_string(n_attributes) + "x" + std::to_string(n_methods) +
           "-" + std::to_string(n_uses);
  return DesignProblem(std::move(name), std::move(attributes), std::move(methods),
                       std::move(uses));
}

}  // namespace evodesign
