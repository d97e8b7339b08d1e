#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "evodesign/episode_log.hpp"
#include "evodesign/metrics.hpp"

namespace evodesign {

/// Both rank vectors are constant, so the correlation does not exist.
class UndefinedCorrelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every paired difference is zero, so the signed-rank test is undefined.
class NoEffectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ascending ranks 1..n; tied values share the mean of their rank span.
std::vector<double> ranks(const std::vector<double>& values);

struct SpearmanResult {
  double rho = 0.0;
  double p_two_tailed = 1.0;
};

/// Pearson correlation of tie-averaged ranks; p from the t approximation
/// with n-2 degrees of freedom. Requires n >= 3.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct FriedmanResult {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
};

/// Friedman rank test over blocks (rows) x treatments (columns), with the
/// tie-corrected statistic and a chi-square upper-tail p. A table that is
/// fully tied within every block carries no information: statistic 0, p 1.
FriedmanResult friedman(const std::vector<std::vector<double>>& blocks);

enum class Alternative { kTwoSided, kLess, kGreater };

struct WilcoxonResult {
  double w = 0.0;
  double p = 1.0;
  std::size_t n_effective = 0;
};

/// Matched-pairs signed-rank test on d = x - y. Zero differences are dropped,
/// |d| is tie-average-ranked, and W = min(positive-rank sum, negative-rank
/// sum). For n_effective <= 25 the p-value comes from the exact sign-flip
/// distribution; beyond that, from the normal approximation with tie
/// correction. kLess tests that x tends below y (small positive-rank sum).
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    Alternative alternative = Alternative::kTwoSided);

struct CorrelationCell {
  bool computable = false;
  std::size_t n = 0;
  double rho = 0.0;
  double p = 1.0;
};

/// 4x4 grid: rows are the reward series grouped by the measure that selected
/// the presented candidate, columns are the four elegance values of those
/// candidates.
struct CorrelationMatrix {
  std::array<std::array<CorrelationCell, kMeasureCount>, kMeasureCount> cells{};

  const CorrelationCell& cell(Measure reward, Measure elegance) const {
    return cells[static_cast<std::size_t>(reward)][static_cast<std::size_t>(elegance)];
  }
};

/// Pools the interaction records of all logs and correlates stars against
/// candidate elegance per (reward, elegance) cell. Cells with fewer than
/// three samples or with a constant variable stay not-computable; nothing
/// throws.
CorrelationMatrix correlate_logs(const std::vector<EpisodeLog>& logs);

/// One line per cell: reward, elegance, n, rho, p columns; NA for
/// not-computable cells.
std::string correlation_matrix_tsv(const CorrelationMatrix& matrix);

/// Nested object reward-measure -> elegance-measure -> {n, rho, p} or null.
nlohmann::json correlation_matrix_json(const CorrelationMatrix& matrix);

}  // namespace evodesign
