#include <cmath>

#include "doctest.h"

#include "borel/criteria.hpp"
#include "support/random_models.hpp"
#include "support/reference.hpp"

using namespace borel;
using borel::testing::Gen;

namespace {

SeriesReport report_from(std::vector<double> terms, std::vector<std::uint8_t> zero_flags = {}) {
  SeriesReport r;
  r.kind = SeriesKind::window(1);
  if (zero_flags.empty()) zero_flags.assign(terms.size(), 0);
  r.structural_zero = std::move(zero_flags);
  double s = 0;
  for (double t : terms) r.partial_sums.push_back(s += t);
  r.terms = std::move(terms);
  r.tail = fit_tail(r.terms);
  return r;
}

std::vector<double> power_terms(Index n, double s) {
  std::vector<double> out;
  for (Index k = 1; k <= n; ++k) out.push_back(std::pow(static_cast<double>(k), -s));
  return out;
}

}  // namespace

TEST_CASE("series_terms examples") {
  const IndependentModel coin(ProbabilitySequence::constant(0.5));
  for (const auto& v : series_terms(coin, SeriesKind::window(1), 50)) CHECK(v.prob == 0.25);

  const auto inter = make_interleaved_nested_model();
  for (const auto& v : series_terms(inter, SeriesKind::window(2), 2000)) {
    CHECK(v.prob == 0.0);
    CHECK(v.structural_zero);
  }

  const IndependentModel squares(ProbabilitySequence::power_law(1, 2));
  const auto r = series_report(squares, SeriesKind::marginals(), 1000);
  CHECK(std::abs(r.partial_sums.back() - testing::kInverseSquares1000) < 1e-13);
  CHECK(std::abs(r.partial_sums.back() - testing::power_sum(1000, 2).convert_to<double>()) < 1e-13);
}

TEST_CASE("compensated partial sums over 1e5 terms") {
  const IndependentModel squares(ProbabilitySequence::power_law(1, 2));
  const auto r = series_report(squares, SeriesKind::marginals(), 100'000);
  const double ref = testing::power_sum(100'000, 2).convert_to<double>();
  CHECK(std::abs(r.partial_sums.back() - ref) < 1e-10);
  for (std::size_t i = 1; i < r.partial_sums.size(); ++i) CHECK(r.partial_sums[i] >= r.partial_sums[i - 1]);
}

TEST_CASE("classify examples") {
  const AnalyticMetadata none;
  CHECK(classify(report_from(std::vector<double>(200, 0.0), std::vector<std::uint8_t>(200, 1)), none).kind ==
        VerdictKind::CertifiedConvergent);

  const IndependentModel coin(ProbabilitySequence::constant(0.5));
  CHECK(series_report(coin, SeriesKind::window(1), 200).verdict.kind == VerdictKind::CertifiedDivergent);

  const IndependentModel harmonic(ProbabilitySequence::power_law(1, 1));
  const auto h = series_report(harmonic, SeriesKind::marginals(), 10'000);
  CHECK(h.verdict.kind == VerdictKind::CertifiedDivergent);
  CHECK(h.verdict.justification.find("closed form") == 0);
  // Without the family's closed form the fit sits on the p-series boundary.
  CHECK(h.tail.slope == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(classify(h, none).kind == VerdictKind::Inconclusive);
}

TEST_CASE("numeric rules") {
  const AnalyticMetadata none;
  CHECK(classify(report_from(power_terms(1000, 2)), none).kind == VerdictKind::LikelyConvergent);
  CHECK(classify(report_from(power_terms(1000, 0.5)), none).kind == VerdictKind::LikelyDivergent);
  CHECK(classify(report_from(power_terms(1000, 1.05)), none).kind == VerdictKind::Inconclusive);
  CHECK(classify(report_from(std::vector<double>(500, 0.3)), none).kind == VerdictKind::LikelyDivergent);
  CHECK_THROWS_AS(classify(report_from(power_terms(99, 2)), none), InsufficientData);

  AnalyticMetadata meta;
  meta.series.emplace_back(SeriesKind::window(1), SeriesClass::CertifiedConvergent);
  meta.description = "test";
  CHECK(classify(report_from(power_terms(5, 2)), meta).kind == VerdictKind::CertifiedConvergent);
}

TEST_CASE("zeros certify only when proven") {
  const AnalyticMetadata none;
  auto terms = power_terms(1000, 1);
  std::vector<std::uint8_t> flags(1000, 0);
  for (std::size_t i = 50; i < 1000; ++i) {
    terms[i] = 0.0;
    flags[i] = 1;
  }
  const auto proven = classify(report_from(terms, flags), none);
  CHECK(proven.kind == VerdictKind::CertifiedConvergent);
  CHECK(proven.justification.find("eventually zero terms") == 0);

  CHECK(classify(report_from(terms), none).kind == VerdictKind::LikelyConvergent);

  // A proven run that starts inside the tail is not enough.
  auto late = power_terms(1000, 1);
  std::vector<std::uint8_t> late_flags(1000, 0);
  for (std::size_t i = 300; i < 1000; ++i) {
    late[i] = 0.0;
    late_flags[i] = i >= 500 ? 1 : 0;
  }
  CHECK(classify(report_from(late, late_flags), none).kind == VerdictKind::LikelyConvergent);
}

TEST_CASE("metadata never weakens a verdict") {
  Gen g(53);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = g.integer(100, 1500);
    const double s = 3 * g.uniform();
    std::vector<double> terms;
    std::vector<std::uint8_t> flags;
    const Index zero_from = g.coin(0.3) ? g.integer(1, n) : n + 1;
    for (Index k = 1; k <= n; ++k) {
      const bool zero = k >= zero_from;
      terms.push_back(zero ? 0.0 : std::pow(static_cast<double>(k), -s) * (0.5 + g.uniform()));
      flags.push_back(zero && g.coin(0.9) ? 1 : 0);
    }
    const auto r = report_from(terms, flags);
    const auto bare = classify(r, {});
    for (auto cls : {SeriesClass::CertifiedConvergent, SeriesClass::CertifiedDivergent}) {
      AnalyticMetadata meta;
      meta.series.emplace_back(SeriesKind::window(1), cls);
      meta.description = "closed form";
      const auto with = classify(r, meta);
      CHECK(with.certified());
      const bool agrees = (cls == SeriesClass::CertifiedConvergent) == bare.convergent();
      if (bare.certified() && agrees) CHECK(with.kind == bare.kind);
    }
  }
}

TEST_CASE("termwise domination") {
  Gen g(59);
  for (int check = 0; check < 1000; ++check) {
    auto model = testing::random_model(g, check);
    const Index n = g.integer(1, 60);
    const Index m = g.integer(1, 5);
    double prev = window_prob(*model, WindowPattern::occurrence(n, m));
    for (Index j = 1; j <= m; ++j) {
      const double next = window_prob(*model, WindowPattern::occurrence(n + j, m - j));
      CHECK(prev <= next + 1e-12);
      prev = next;
    }
    CHECK(std::abs(prev - marginal_prob(*model, n + m)) == 0.0);
  }
}

TEST_CASE("check_lemma examples") {
  const auto nested = make_nested_model();
  const auto m0 = check_lemma(nested, 0, 10'000, 1e-3);
  CHECK(m0.series.verdict.divergent());
  CHECK(m0.conclusion == LemmaConclusion::NoConclusion);
  const auto m1 = check_lemma(nested, 1, 10'000, 1e-3);
  CHECK(m1.series.verdict.kind == VerdictKind::CertifiedConvergent);
  CHECK(m1.decay.verdict == DecayVerdict::CertifiedZeroLimit);
  CHECK(m1.conclusion == LemmaConclusion::IOProbZero);
  CHECK(m1.strength == Strength::Certified);

  const auto inter = make_interleaved_nested_model();
  const auto i1 = check_lemma(inter, 1, 10'000, 1e-3);
  CHECK(i1.conclusion == LemmaConclusion::NoConclusion);
  CHECK(i1.series.tail.slope == doctest::Approx(-1.0).epsilon(0.1));
  const auto i2 = check_lemma(inter, 2, 10'000, 1e-3);
  CHECK(i2.conclusion == LemmaConclusion::IOProbZero);
  CHECK(i2.strength == Strength::Certified);

  const IndependentModel coin(ProbabilitySequence::constant(0.5));
  const auto c0 = check_lemma(coin, 0, 1000, 1e-3);
  CHECK(c0.conclusion == LemmaConclusion::IOProbOne);
  CHECK(c0.strength == Strength::Certified);

  const IndependentModel squares(ProbabilitySequence::power_law(1, 2));
  const auto s0 = check_lemma(squares, 0, 1000, 1e-3);
  CHECK(s0.conclusion == LemmaConclusion::IOProbZero);
  CHECK(s0.strength == Strength::Certified);

  // Dependent events with a divergent marginal series never yield IOProbOne.
  Eigen::MatrixXd p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  const MarkovModel fair(p, Eigen::RowVectorXd::Constant(2, 0.5), EventSchedule::constant({0}));
  CHECK(check_lemma(fair, 0, 1000, 1e-3).conclusion == LemmaConclusion::NoConclusion);
}

TEST_CASE("suffix orientation") {
  const auto nested = make_nested_model();
  // A_n minus A_{n+1} has probability 1/n - 1/(n+1): the suffix series converges.
  const auto r = check_lemma(nested, 1, 1000, 1e-3, Orientation::SuffixComplement);
  CHECK(r.series.terms[9] == doctest::Approx(1.0 / 10 - 1.0 / 11).epsilon(1e-12));
  CHECK(r.series.verdict.kind == VerdictKind::LikelyConvergent);
  CHECK(r.conclusion == LemmaConclusion::IOProbZero);
  CHECK(r.strength == Strength::Likely);
}

TEST_CASE("sweep_m examples") {
  const auto inter = sweep_m(make_interleaved_nested_model(), 3, 10'000, 1e-3);
  REQUIRE(inter.results.size() == 4);
  CHECK(inter.least_m == 2);
  CHECK(inter.least_certified_m == 2);

  const auto nested = sweep_m(make_nested_model(), 2, 10'000, 1e-3);
  CHECK(nested.least_m == 1);
  CHECK(nested.least_certified_m == 1);

  const auto coin = sweep_m(IndependentModel(ProbabilitySequence::constant(0.5)), 3, 1000, 1e-3);
  CHECK(!coin.least_m.has_value());
  for (const auto& r : coin.results) {
    CHECK(r.series.verdict.kind == VerdictKind::CertifiedDivergent);
    CHECK(r.series.terms.front() > 0.0);
  }

  CHECK_THROWS_AS(sweep_m(make_nested_model(), 9, 100, 1e-3), std::invalid_argument);
}
