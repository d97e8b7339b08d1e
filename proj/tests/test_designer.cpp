#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "evodesign/designer.hpp"
#include "evodesign/metrics.hpp"

using namespace evodesign;

namespace {

MetricVector with_nac(double v) {
  MetricVector m;
  m.nac = v;
  return m;
}

}  // namespace

TEST_CASE("constant designers never waver") {
  Designer d = Designer::constant(3);
  for (int i = 0; i < 50; ++i) CHECK(d.rate(with_nac(i), Measure::kEc) == 3);
  CHECK(Designer::constant(1).rate(with_nac(0), Measure::kNac) == 1);
  CHECK(Designer::constant(5).rate(with_nac(9), Measure::kNac) == 5);
  CHECK_THROWS_AS(Designer::constant(0), std::invalid_argument);
  CHECK_THROWS_AS(Designer::constant(6), std::invalid_argument);
}

TEST_CASE("the purist normalizes against its running range") {
  Designer d = Designer::measure_purist(Measure::kNac);
  CHECK(d.rate(with_nac(2.0), Measure::kNac) == 3);  // first call anchors at 3
  CHECK(d.rate(with_nac(0.0), Measure::kNac) == 5);  // new minimum
  CHECK(d.rate(with_nac(1.0), Measure::kNac) == 3);  // midpoint of [0,2]
}

TEST_CASE("the purist with a degenerate range stays at 3") {
  Designer d = Designer::measure_purist(Measure::kIu);
  MetricVector m;
  m.iu = 1.25;
  for (int i = 0; i < 10; ++i) CHECK(d.rate(m, Measure::kNac) == 3);
}

TEST_CASE("the purist rates its own measure, not the presented one") {
  Designer d = Designer::measure_purist(Measure::kNac);
  MetricVector m;
  m.ec = 100.0;  // wildly bad on the presented measure
  m.nac = 2.0;
  CHECK(d.rate(m, Measure::kEc) == 3);
  m.ec = 0.0;
  m.nac = 0.0;  // best nac so far wins 5 stars despite the ec swing
  CHECK(d.rate(m, Measure::kEc) == 5);
}

TEST_CASE("purist stars fall as the target value rises over a frozen range") {
  Designer d = Designer::measure_purist(Measure::kNac);
  d.rate(with_nac(0.0), Measure::kNac);
  d.rate(with_nac(10.0), Measure::kNac);  // range frozen at [0, 10]
  int previous = 6;
  for (int v = 0; v <= 10; ++v) {
    int stars = d.rate(with_nac(v), Measure::kNac);
    CHECK(stars >= 1);
    CHECK(stars <= 5);
    CHECK(stars <= previous);
    previous = stars;
  }
  CHECK(d.rate(with_nac(0.0), Measure::kNac) == 5);
  CHECK(d.rate(with_nac(10.0), Measure::kNac) == 1);
}

TEST_CASE("random designers are uniform over the five stars") {
  Designer d = Designer::uniform_random(42);
  std::array<int, 6> freq{};
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    int stars = d.rate(with_nac(0), Measure::kNac);
    REQUIRE(stars >= 1);
    REQUIRE(stars <= 5);
    ++freq[stars];
  }
  double bound = 3.0 * std::sqrt(trials * 0.2 * 0.8);  // 3 sigma = 120
  for (int s = 1; s <= 5; ++s)
    CHECK(std::abs(freq[s] - trials / 5.0) <= bound);
}

TEST_CASE("random designers replay identically from a seed") {
  Designer a = Designer::uniform_random(7);
  Designer b = Designer::uniform_random(7);
  Designer c = Designer::uniform_random(8);
  std::vector<int> sa, sb, sc;
  for (int i = 0; i < 100; ++i) {
    sa.push_back(a.rate(with_nac(0), Measure::kNac));
    sb.push_back(b.rate(with_nac(0), Measure::kNac));
    sc.push_back(c.rate(with_nac(0), Measure::kNac));
  }
  CHECK(sa == sb);
  CHECK(sa != sc);
}

TEST_CASE("profile specs parse and echo") {
  CHECK(Designer::parse("constant:3").kind() == Designer::Kind::kConstant);
  CHECK(Designer::parse("random:42").kind() == Designer::Kind::kUniformRandom);
  CHECK(Designer::parse("purist:nac").kind() == Designer::Kind::kMeasurePurist);
  CHECK(Designer::parse("purist:atmr").spec() == "purist:atmr");

  Designer d = Designer::parse("constant:4");
  CHECK(d.rate(with_nac(0), Measure::kNac) == 4);

  // the parsed purist behaves like the directly built one
  Designer e = Designer::parse("purist:ec");
  MetricVector m;
  m.ec = 5.0;
  CHECK(e.rate(m, Measure::kNac) == 3);
}

TEST_CASE("bad profile specs are rejected") {
  for (const char* spec : {"", "constant", "constant:", "constant:9",
                           "constant:x", "random:", "random:banana",
                           "purist:coupling", "purist:NAC", "wizard:1"}) {
    CAPTURE(spec);
    CHECK_THROWS_AS(Designer::parse(spec), std::invalid_argument);
  }
}
