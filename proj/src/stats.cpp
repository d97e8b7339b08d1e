#include "evodesign/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace evodesign {
namespace {

void check_finite(const std::vector<double>& values, const char* label) {
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(label) + " must be finite");
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Sum over groups of tied values of t^3 - t, where t is the group size.
double tie_term(const std::vector<double>& values) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

}  // namespace

std::vector<double> ranks(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("ranks: empty input");
  check_finite(values, "ranks: values");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> result(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) span ranks i+1..j; ties take the mean.
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) result[order[k]] = rank;
    i = j;
  }
  return result;
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("spearman: need at least 3 pairs");
  check_finite(x, "spearman: x");
  check_finite(y, "spearman: y");

  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw UndefinedCorrelationError("spearman: a variable has zero rank variance");

  SpearmanResult result;
  result.rho = sxy / std::sqrt(sxx * syy);

  const double denom = 1.0 - result.rho * result.rho;
  if (denom <= 0.0) {
    result.p_two_tailed = 0.0;
    return result;
  }
  const double t = result.rho * std::sqrt((n - 2.0) / denom);
  const boost::math::students_t dist(n - 2.0);
  result.p_two_tailed = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return result;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& blocks) {
  if (blocks.size() < 2) throw std::invalid_argument("friedman: need at least 2 blocks");
  const std::size_t k = blocks.front().size();
  if (k < 2) throw std::invalid_argument("friedman: need at least 2 treatments");
  for (const auto& block : blocks) {
    if (block.size() != k) throw std::invalid_argument("friedman: ragged table");
    check_finite(block, "friedman: values");
  }

  const double n = static_cast<double>(blocks.size());
  const double kd = static_cast<double>(k);
  std::vector<double> column_rank_sum(k, 0.0);
  double ties = 0.0;
  for (const auto& block : blocks) {
    const std::vector<double> r = ranks(block);
    for (std::size_t j = 0; j < k; ++j) column_rank_sum[j] += r[j];
    ties += tie_term(block);
  }

  double sum_sq = 0.0;
  for (double rj : column_rank_sum) sum_sq += rj * rj;
  const double uncorrected =
      12.0 / (n * kd * (kd + 1.0)) * sum_sq - 3.0 * n * (kd + 1.0);
  const double correction = 1.0 - ties / (n * kd * (kd * kd - 1.0));

  FriedmanResult result;
  result.df = static_cast<int>(k) - 1;
  if (correction <= 0.0) {
    // Every block fully tied: no ranking information.
    result.chi2 = 0.0;
    result.p = 1.0;
    return result;
  }
  result.chi2 = uncorrected / correction;
  const boost::math::chi_squared dist(static_cast<double>(result.df));
  result.p = boost::math::cdf(boost::math::complement(dist, result.chi2));
  return result;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y,
                                    Alternative alternative) {
  if (x.size() != y.size()) throw std::invalid_argument("wilcoxon: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("wilcoxon: need at least 2 pairs");
  check_finite(x, "wilcoxon: x");
  check_finite(y, "wilcoxon: y");

  std::vector<double> diffs;
  diffs.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) throw NoEffectError("wilcoxon: all differences are zero");

  std::vector<double> abs_diffs(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) abs_diffs[i] = std::abs(diffs[i]);
  const std::vector<double> r = ranks(abs_diffs);

  double w_plus = 0.0, w_minus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    (diffs[i] > 0.0 ? w_plus : w_minus) += r[i];

  WilcoxonResult result;
  result.n_effective = diffs.size();
  result.w = std::min(w_plus, w_minus);

  const std::size_t n = diffs.size();
  if (n <= 25) {
    // Exact sign-flip distribution of the positive-rank sum. Tie-averaged
    // ranks are multiples of 1/2, so doubling puts everything on integers.
    std::vector<long long> units(n);
    long long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      units[i] = std::llround(2.0 * r[i]);
      total += units[i];
    }
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    long long reach = 0;
    for (long long u : units) {
      reach += u;
      for (long long s = reach; s >= u; --s)
        count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - u)];
    }
    const double scale = std::ldexp(1.0, static_cast<int>(n));
    const auto cdf_at = [&](long long t) {
      double acc = 0.0;
      for (long long s = 0; s <= std::min(t, total); ++s)
        acc += count[static_cast<std::size_t>(s)];
      return acc / scale;
    };
    const long long observed = std::llround(2.0 * w_plus);
    const double p_less = cdf_at(observed);
    const double p_greater = 1.0 - cdf_at(observed - 1);
    switch (alternative) {
      case Alternative::kLess: result.p = p_less; break;
      case Alternative::kGreater: result.p = p_greater; break;
      case Alternative::kTwoSided:
        result.p = std::min(1.0, 2.0 * std::min(p_less, p_greater));
        break;
    }
    return result;
  }

  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  const double variance =
      nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term(abs_diffs) / 48.0;
  const double z = (w_plus - mean) / std::sqrt(variance);
  switch (alternative) {
    case Alternative::kLess: result.p = standard_normal_cdf(z); break;
    case Alternative::kGreater: result.p = standard_normal_cdf(-z); break;
    case Alternative::kTwoSided:
      result.p = std::min(1.0, 2.0 * standard_normal_cdf(-std::abs(z)));
      break;
  }
  return result;
}

CorrelationMatrix correlate_logs(const std::vector<EpisodeLog>& logs) {
  // Pooled per reward measure: the stars given and the candidate's four
  // elegance values at each interaction.
  std::array<std::vector<double>, kMeasureCount> stars;
  std::array<std::array<std::vector<double>, kMeasureCount>, kMeasureCount> elegance;
  for (const EpisodeLog& log : logs) {
    for (const InteractionRecord* record : interaction_records(log)) {
      const auto reward = static_cast<std::size_t>(record->chosen_measure);
      stars[reward].push_back(static_cast<double>(record->stars));
      for (std::size_t e = 0; e < kMeasureCount; ++e)
        elegance[reward][e].push_back(
            record->candidate_metrics.measure_value(static_cast<Measure>(e)));
    }
  }

  CorrelationMatrix matrix;
  for (std::size_t reward = 0; reward < kMeasureCount; ++reward) {
    for (std::size_t e = 0; e < kMeasureCount; ++e) {
      CorrelationCell& cell = matrix.cells[reward][e];
      cell.n = stars[reward].size();
      if (cell.n < 3) continue;
      try {
        const SpearmanResult r = spearman(stars[reward], elegance[reward][e]);
        cell.computable = true;
        cell.rho = r.rho;
        cell.p = r.p_two_tailed;
      } catch (const UndefinedCorrelationError&) {
        // Constant stars or constant elegance: cell stays not-computable.
      }
    }
  }
  return matrix;
}

std::string correlation_matrix_tsv(const CorrelationMatrix& matrix) {
  std::string out = "reward\telegance\tn\trho\tp\n";
  char buffer[64];
  for (std::size_t reward = 0; reward < kMeasureCount; ++reward) {
    for (std::size_t e = 0; e < kMeasureCount; ++e) {
      const CorrelationCell& cell = matrix.cells[reward][e];
      out += measure_name(static_cast<Measure>(reward));
      out += '\t';
      out += measure_name(static_cast<Measure>(e));
      std::snprintf(buffer, sizeof(buffer), "\t%zu", cell.n);
      out += buffer;
      if (cell.computable) {
        std::snprintf(buffer, sizeof(buffer), "\t%.6g\t%.6g\n", cell.rho, cell.p);
        out += buffer;
      } else {
        out += "\tNA\tNA\n";
      }
    }
  }
  return out;
}

nlohmann::json correlation_matrix_json(const CorrelationMatrix& matrix) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t reward = 0; reward < kMeasureCount; ++reward) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t e = 0; e < kMeasureCount; ++e) {
      const CorrelationCell& cell = matrix.cells[reward][e];
      const std::string key(measure_name(static_cast<Measure>(e)));
      if (cell.computable) {
        row[key] = {{"n", cell.n}, {"rho", cell.rho}, {"p", cell.p}};
      } else {
        row[key] = nullptr;
      }
    }
    j[std::string(measure_name(static_cast<Measure>(reward)))] = std::move(row);
  }
  return j;
}

}  // namespace evodesign
