#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "evodesign/genome.hpp"
#include "evodesign/metrics.hpp"
#include "evodesign/problem.hpp"
#include "evodesign/random.hpp"

using namespace evodesign;

namespace {

// Independent oracle: naive per-class counting plus the textbook population
// standard deviation, kept free of any code under test.
double oracle_stddev(const std::vector<double>& values) {
  double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / values.size());
}

int oracle_class_of(const DesignProblem& p, const DesignSolution& s, int method,
                    int attribute, bool want_method) {
  return want_method ? s.assignment[p.method_element(method)]
                     : s.assignment[p.attribute_element(attribute)];
}

double oracle_coupling(const DesignProblem& p, const DesignSolution& s) {
  int external = 0;
  for (auto [m, a] : p.uses())
    external += oracle_class_of(p, s, m, a, true) != oracle_class_of(p, s, m, a, false);
  return static_cast<double>(external) / p.use_count();
}

double oracle_nac(const DesignProblem& p, const DesignSolution& s) {
  std::vector<double> attrs(s.class_count, 0.0), meths(s.class_count, 0.0);
  for (int i = 0; i < p.attribute_count(); ++i) attrs[s.assignment[p.attribute_element(i)]] += 1;
  for (int i = 0; i < p.method_count(); ++i) meths[s.assignment[p.method_element(i)]] += 1;
  return (oracle_stddev(attrs) + oracle_stddev(meths)) / 2.0;
}

double oracle_ec(const DesignProblem& p, const DesignSolution& s) {
  std::vector<double> counts(s.class_count, 0.0);
  for (auto [m, a] : p.uses()) {
    int cm = oracle_class_of(p, s, m, a, true);
    int ca = oracle_class_of(p, s, m, a, false);
    if (cm != ca) {
      counts[cm] += 1;
      counts[ca] += 1;
    }
  }
  return oracle_stddev(counts);
}

double oracle_iu(const DesignProblem& p, const DesignSolution& s) {
  std::vector<double> counts(s.class_count, 0.0);
  for (auto [m, a] : p.uses()) {
    int cm = oracle_class_of(p, s, m, a, true);
    if (cm == oracle_class_of(p, s, m, a, false)) counts[cm] += 1;
  }
  return oracle_stddev(counts);
}

double oracle_atmr(const DesignProblem& p, const DesignSolution& s) {
  std::vector<double> attrs(s.class_count, 0.0), meths(s.class_count, 0.0);
  for (int i = 0; i < p.attribute_count(); ++i) attrs[s.assignment[p.attribute_element(i)]] += 1;
  for (int i = 0; i < p.method_count(); ++i) meths[s.assignment[p.method_element(i)]] += 1;
  std::vector<double> ratios(s.class_count);
  for (int c = 0; c < s.class_count; ++c)
    ratios[c] = attrs[c] / std::max(meths[c], 1.0);
  return oracle_stddev(ratios);
}

// Elements named by index so tests can place every element explicitly:
// attributes a<i>, methods m<i>.
DesignProblem make_problem(int n_attrs, int n_meths,
                           std::vector<std::pair<int, int>> uses) {
  std::vector<std::string> attrs, meths;
  for (int i = 0; i < n_attrs; ++i) attrs.push_back("a" + std::to_string(i));
  for (int i = 0; i < n_meths; ++i) meths.push_back("m" + std::to_string(i));
  std::vector<std::pair<std::string, std::string>> named;
  for (auto [m, a] : uses)
    named.push_back({"m" + std::to_string(m), "a" + std::to_string(a)});
  return DesignProblem("t", attrs, meths, named);
}

}  // namespace

TEST_CASE("coupling counts the external fraction of uses") {
  // a0,m0 in class 0 and a1,m1 in class 1; both uses stay internal
  DesignProblem p = make_problem(2, 2, {{0, 0}, {1, 1}});
  CHECK(coupling(p, {2, {0, 1, 0, 1}}) == 0.0);
  // swap the methods and both uses cross
  CHECK(coupling(p, {2, {0, 1, 1, 0}}) == 1.0);
}

TEST_CASE("six external of 39 uses prints as the familiar 0.154") {
  // class 0: attributes a0..a32 plus m0, which uses all of them internally;
  // class 1: a33 plus m1, which reaches into class 0 six times
  std::vector<std::pair<int, int>> uses;
  for (int i = 0; i < 33; ++i) uses.push_back({0, i});
  for (int i = 0; i < 6; ++i) uses.push_back({1, i});
  DesignProblem p = make_problem(34, 2, uses);
  DesignSolution s{2, {}};
  s.assignment.assign(p.element_count(), 0);
  s.assignment[p.attribute_element(33)] = 1;
  s.assignment[p.method_element(1)] = 1;

  double c = coupling(p, s);
  CHECK(c == 6.0 / 39.0);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.3f", c);
  CHECK(std::string(buf) == "0.154");
}

TEST_CASE("nac averages the attribute and method spread") {
  // class 0: a0, m0, m1; class 1: a1, a2, a3, m2, m3
  DesignProblem p = make_problem(4, 4, {{0, 0}});
  DesignSolution even{2, {0, 0, 1, 1, 0, 0, 1, 1}};
  // attributes [2,2], methods [2,2]
  CHECK(nac_elegance(p, even) == 0.0);

  DesignSolution skew{2, {0, 1, 1, 1, 0, 0, 1, 1}};
  // attributes [1,3] spread 1.0, methods [2,2] spread 0
  CHECK(nac_elegance(p, skew) == 0.5);
}

TEST_CASE("ec spreads external-couple incidence over both endpoint classes") {
  SUBCASE("no external couples") {
    DesignProblem p = make_problem(2, 2, {{0, 0}, {1, 1}});
    CHECK(ec_elegance(p, {2, {0, 1, 0, 1}}) == 0.0);
  }
  SUBCASE("a single cross-couple is symmetric") {
    DesignProblem p = make_problem(2, 2, {{0, 0}});
    // a0 and m1 in class 0, a1 and m0 in class 1: the lone use crosses and
    // hits both classes once, counts [1,1]
    CHECK(ec_elegance(p, {2, {0, 1, 1, 0}}) == 0.0);
  }
  SUBCASE("incidence counts 2,1,1") {
    // singleton classes a0 | m0 | m1; both methods use a0
    DesignProblem p = make_problem(1, 2, {{0, 0}, {1, 0}});
    DesignSolution s{3, {0, 1, 2}};
    CHECK(ec_elegance(p, s) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-12));
    CHECK(ec_elegance(p, s) == doctest::Approx(0.4714).epsilon(1e-4));
  }
}

TEST_CASE("iu spreads internal-use counts") {
  // class 0: a0, a1, m0 with two internal uses; class 1: just m1
  DesignProblem p = make_problem(2, 2, {{0, 0}, {0, 1}});
  CHECK(iu_elegance(p, {2, {0, 0, 0, 1}}) == 1.0);
  // every use external: counts all zero
  CHECK(iu_elegance(p, {2, {1, 1, 0, 1}}) == 0.0);
}

TEST_CASE("atmr uses a clamped method denominator") {
  // class 0: 2 attrs, 2 methods; class 1: 3 attrs, 1 method
  DesignProblem p = make_problem(5, 3, {{0, 0}});
  DesignSolution s{2, {0, 0, 1, 1, 1, 0, 0, 1}};
  CHECK(atmr_elegance(p, s) == 1.0);

  // class 0: 4 attrs, no methods (ratio clamps to 4); class 1: 2 methods
  DesignProblem q = make_problem(4, 2, {{0, 0}});
  DesignSolution t{2, {0, 0, 0, 0, 1, 1}};
  CHECK(atmr_elegance(q, t) == 2.0);
}

TEST_CASE("evaluate bundles the five metrics") {
  DesignProblem p = generate_fixture(6, 5, 12, 21);
  RandomSource rng(3);
  DesignSolution s = random_solution(p, 3, rng);
  MetricVector m = evaluate(p, s);
  CHECK(m.coupling == coupling(p, s));
  CHECK(m.nac == nac_elegance(p, s));
  CHECK(m.ec == ec_elegance(p, s));
  CHECK(m.iu == iu_elegance(p, s));
  CHECK(m.atmr == atmr_elegance(p, s));
}

TEST_CASE("metrics agree with the counting oracle on random pairs") {
  std::mt19937 gen(1234);
  RandomSource rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    int n_attrs = 2 + static_cast<int>(gen() % 5);
    int n_meths = 2 + static_cast<int>(gen() % 5);
    int grid = n_attrs * n_meths;
    int n_uses = 1 + static_cast<int>(gen() % grid);
    DesignProblem p = generate_fixture(n_attrs, n_meths, n_uses, gen());
    int k = 2 + static_cast<int>(gen() % 3);
    DesignSolution s = random_solution(p, k, rng);

    CAPTURE(trial);
    CHECK(std::abs(coupling(p, s) - oracle_coupling(p, s)) <= 1e-12);
    CHECK(std::abs(nac_elegance(p, s) - oracle_nac(p, s)) <= 1e-12);
    CHECK(std::abs(ec_elegance(p, s) - oracle_ec(p, s)) <= 1e-12);
    CHECK(std::abs(iu_elegance(p, s) - oracle_iu(p, s)) <= 1e-12);
    CHECK(std::abs(atmr_elegance(p, s) - oracle_atmr(p, s)) <= 1e-12);
  }
}

TEST_CASE("relabeling classes changes no metric") {
  DesignProblem p = generate_fixture(8, 7, 25, 5);
  RandomSource rng(11);
  std::mt19937 gen(42);
  for (int trial = 0; trial < 20; ++trial) {
    DesignSolution s = random_solution(p, 4, rng);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), gen);
    DesignSolution relabeled = s;
    for (int& c : relabeled.assignment) c = perm[c];

    MetricVector a = evaluate(p, s), b = evaluate(p, relabeled);
    CHECK(a.coupling == b.coupling);  // integer counting, exactly invariant
    // the stddevs accumulate per-class terms in the permuted order, so allow
    // the last ulp to move
    CHECK(std::abs(a.nac - b.nac) <= 1e-12);
    CHECK(std::abs(a.ec - b.ec) <= 1e-12);
    CHECK(std::abs(a.iu - b.iu) <= 1e-12);
    CHECK(std::abs(a.atmr - b.atmr) <= 1e-12);
  }
}

TEST_CASE("element file order changes no metric") {
  // same design, elements listed in a different order
  DesignProblem p = make_problem(3, 2, {{0, 0}, {0, 2}, {1, 1}});
  DesignProblem q("t", {"a2", "a0", "a1"}, {"m1", "m0"},
                  {{"m0", "a0"}, {"m0", "a2"}, {"m1", "a1"}});
  // class of each named element kept identical across both listings
  DesignSolution sp{2, {0, 1, 0, 0, 1}};   // a0,a1,a2,m0,m1
  DesignSolution sq{2, {0, 0, 1, 1, 0}};   // a2,a0,a1,m1,m0
  MetricVector a = evaluate(p, sp), b = evaluate(q, sq);
  CHECK(a.coupling == b.coupling);
  CHECK(a.nac == b.nac);
  CHECK(a.ec == b.ec);
  CHECK(a.iu == b.iu);
  CHECK(a.atmr == b.atmr);
}

TEST_CASE("measure and objective names round-trip") {
  CHECK(measure_name(Measure::kNac) == "nac");
  CHECK(measure_name(Measure::kAtmr) == "atmr");
  CHECK(objective_name(Objective::kCoupling) == "coupling");
  for (Measure m : {Measure::kNac, Measure::kEc, Measure::kIu, Measure::kAtmr}) {
    CHECK(measure_from_name(measure_name(m)) == m);
    CHECK(objective_name(objective_of(m)) == measure_name(m));
  }
  CHECK_THROWS_AS(measure_from_name("coupling"), std::invalid_argument);
}

TEST_CASE("metric vectors serialize at full precision") {
  MetricVector m{6.0 / 39.0, 1.0 / 3.0, std::sqrt(2.0) / 3.0, 0.0, 4.0 / 7.0};
  nlohmann::json j = m;
  MetricVector back = j.get<MetricVector>();
  CHECK(back.coupling == m.coupling);
  CHECK(back.nac == m.nac);
  CHECK(back.ec == m.ec);
  CHECK(back.iu == m.iu);
  CHECK(back.atmr == m.atmr);
  CHECK(m.objective_value(Objective::kEc) == m.ec);
  CHECK(m.measure_value(Measure::kIu) == m.iu);
}
