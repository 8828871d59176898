#include <cmath>

#include "doctest.h"

#include "borel/family_metadata.hpp"
#include "borel/sequence.hpp"
#include "borel/summation.hpp"
#include "support/reference.hpp"

using namespace borel;

TEST_CASE("family values") {
  CHECK(ProbabilitySequence::constant(0.5)(7) == 0.5);
  CHECK(ProbabilitySequence::power_law(1, 2)(10) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(ProbabilitySequence::log_power(1, 2)(3) ==
        doctest::Approx(1.0 / (3 * std::log(4.0) * std::log(4.0))).epsilon(1e-15));
  const auto list = ProbabilitySequence::explicit_list({0.9, 0.1}, 0.25);
  CHECK(list(1) == 0.9);
  CHECK(list(2) == 0.1);
  CHECK(list(3) == 0.25);
  CHECK(list(1'000'000) == 0.25);
}

TEST_CASE("out-of-range formulas are clamped and say so") {
  const auto big = ProbabilitySequence::power_law(4, 2);
  CHECK(big(1) == 1.0);
  CHECK(big(2) == 1.0);
  CHECK(big(4) == doctest::Approx(0.25));
  CHECK(big.clamp_note().find("k < 2") != std::string::npos);
  CHECK(big.describe().find("clamped") != std::string::npos);
  CHECK(ProbabilitySequence::constant(1.5)(3) == 1.0);
  CHECK(ProbabilitySequence::constant(-0.5)(3) == 0.0);
  CHECK(ProbabilitySequence::constant(0.5).clamp_note().empty());
  CHECK(ProbabilitySequence::power_law(1, -1)(5) == 1.0);
}

TEST_CASE("limits and series classes") {
  CHECK(ProbabilitySequence::power_law(1, 2).limit() == 0.0);
  CHECK(ProbabilitySequence::power_law(0.3, 0).limit() == 0.3);
  CHECK(ProbabilitySequence::power_law(1, -1).limit() == 1.0);
  CHECK(ProbabilitySequence::constant(0.5).limit() == 0.5);
  CHECK(ProbabilitySequence::explicit_list({0.5}, 0.0).limit() == 0.0);

  CHECK(ProbabilitySequence::power_law(1, 2).sum_class() == SeriesClass::CertifiedConvergent);
  CHECK(ProbabilitySequence::power_law(1, 1).sum_class() == SeriesClass::CertifiedDivergent);
  CHECK(ProbabilitySequence::log_power(1, 2).sum_class() == SeriesClass::CertifiedConvergent);
  CHECK(ProbabilitySequence::log_power(1, 1).sum_class() == SeriesClass::CertifiedDivergent);
  CHECK(ProbabilitySequence::constant(0.0).sum_class() == SeriesClass::CertifiedConvergent);
  CHECK(ProbabilitySequence::explicit_list({1, 1, 1}, 0).sum_class() == SeriesClass::CertifiedConvergent);
  CHECK(ProbabilitySequence::explicit_list({}, 0.01).sum_class() == SeriesClass::CertifiedDivergent);
  CHECK(!sum_argument(ProbabilitySequence::power_law(1, 2)).empty());
}

TEST_CASE("tail bounds dominate long direct sums") {
  struct Case {
    ProbabilitySequence seq;
    Index from;
  };
  const Case cases[] = {
      {ProbabilitySequence::power_law(1, 2), 1},     {ProbabilitySequence::power_law(1, 2), 1000},
      {ProbabilitySequence::power_law(3, 1.5), 1},   {ProbabilitySequence::power_law(0.5, 4), 7},
      {ProbabilitySequence::log_power(1, 3), 1},     {ProbabilitySequence::log_power(2, 2), 50},
      {ProbabilitySequence::explicit_list({0.5, 0.25, 0.125}, 0.0), 2},
  };
  for (const auto& c : cases) {
    CompensatedSum direct;
    for (Index k = c.from; k < c.from + 2'000'000; ++k) direct.add(c.seq(k));
    const auto bound = c.seq.tail_sum_bound(c.from);
    REQUIRE(bound.has_value());
    CHECK(direct.value() <= *bound);
  }
  CHECK(!ProbabilitySequence::power_law(1, 1).tail_sum_bound(10).has_value());
  CHECK(*ProbabilitySequence::explicit_list({0.5, 0.25, 0.125}, 0.0).tail_sum_bound(2) ==
        doctest::Approx(0.375));
}

TEST_CASE("power-law tail bound is close to the true tail") {
  // sum_{k >= 1001} k^-2 = pi^2/6 - partial sum through 1000.
  const double pi2_6 = 1.6449340668482264365;
  const double tail = pi2_6 - testing::kInverseSquares1000;
  const double bound = *ProbabilitySequence::power_law(1, 2).tail_sum_bound(1001);
  CHECK(bound >= tail);
  CHECK(bound - tail < 2e-6);
}

TEST_CASE("invalid parameters name the field") {
  try {
    ProbabilitySequence(ProbabilitySequence::ExplicitList{{0.2, 1.5}, 0.1}, "/marginal");
    FAIL("expected SpecError");
  } catch (const SpecError& e) {
    CHECK(e.field() == "/marginal/values/1");
  }
  CHECK_THROWS_AS(ProbabilitySequence::power_law(-1, 2), SpecError);
  CHECK_THROWS_AS(ProbabilitySequence::constant(NAN), SpecError);
  CHECK_THROWS_AS(ProbabilitySequence::log_power(1, INFINITY), SpecError);
  CHECK_THROWS_AS(ProbabilitySequence::explicit_list({}, 2.0), SpecError);
  CHECK_THROWS_AS(ProbabilitySequence::constant(0.5)(0), IndexOverflow);
}

TEST_CASE("monotonicity flag") {
  CHECK(ProbabilitySequence::power_law(1, 1).non_increasing());
  CHECK(!ProbabilitySequence::power_law(1, -1).non_increasing());
  CHECK(ProbabilitySequence::explicit_list({0.5, 0.5, 0.2}, 0.1).non_increasing());
  CHECK(!ProbabilitySequence::explicit_list({0.5, 0.6}, 0.1).non_increasing());
  CHECK(ProbabilitySequence::power_law(1, -1).eventually_one());
}

TEST_CASE("compensated summation against 50-digit reference") {
  std::vector<double> terms;
  for (long n = 1; n <= 100'000; ++n) terms.push_back(1.0 / (static_cast<double>(n) * static_cast<double>(n)));
  const double ours = compensated_sum(terms);
  const auto ref = testing::power_sum(100'000, 2);
  CHECK(std::abs(ours - ref.convert_to<double>()) < 1e-10);
  CHECK(std::abs(ours - testing::kInverseSquares100000) < 1e-14);
  CHECK(std::abs(testing::power_sum(1000, 2).convert_to<double>() - testing::kInverseSquares1000) < 1e-15);
}
