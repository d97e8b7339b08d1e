#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace evodesign {

/// A design problem reduced to its element sets: named attributes (data),
/// named methods (actions), and the (method, attribute) "uses" between them.
/// Immutable once constructed; array order in the source file is the
/// canonical element order.
class DesignProblem {
 public:
  /// Validates all invariants: identifiers unique and disjoint across the two
  /// sets, every use references existing elements, no duplicate uses, and all
  /// three collections non-empty. Throws ValidationError naming the offender.
  DesignProblem(std::string name, std::vector<std::string> attributes,
                std::vector<std::string> methods,
                std::vector<std::pair<std::string, std::string>> uses);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<std::string>& methods() const { return methods_; }

  /// Uses resolved to (method index, attribute index), in file order.
  const std::vector<std::pair<int, int>>& uses() const { return uses_; }

  int attribute_count() const { return static_cast<int>(attributes_.size()); }
  int method_count() const { return static_cast<int>(methods_.size()); }
  int use_count() const { return static_cast<int>(uses_.size()); }

  /// Genome length. Elements are indexed attributes first (file order), then
  /// methods.
  int element_count() const { return attribute_count() + method_count(); }

  bool element_is_attribute(int element) const { return element < attribute_count(); }
  int attribute_element(int attribute_index) const { return attribute_index; }
  int method_element(int method_index) const { return attribute_count() + method_index; }
  const std::string& element_name(int element) const;

 private:
  std::string name_;
  std::vector<std::string> attributes_;
  std::vector<std::string> methods_;
  std::vector<std::pair<int, int>> uses_;
};

/// Reads the canonical JSON problem format. Malformed syntax raises
/// ParseError with the parser's line/column; invariant violations raise
/// ValidationError.
DesignProblem load_problem(std::istream& in);
DesignProblem load_problem(const std::string& text);
DesignProblem load_problem_file(const std::string& path);

/// Canonical serialization: 2-space pretty JSON with lexicographic keys and a
/// trailing newline. save(load(text)) is byte-identical for canonical input.
std::string save_problem(const DesignProblem& problem);
void save_problem_file(const DesignProblem& problem, const std::string& path);

/// Deterministic synthetic problem with the requested counts; uses are
/// sampled without replacement from the method x attribute grid. A fixed
/// argument tuple always produces the same problem.
DesignProblem generate_fixture(int n_attributes, int n_methods, int n_uses,
                               std::uint64_t seed, std::string name = "");

}  // namespace evodesign
