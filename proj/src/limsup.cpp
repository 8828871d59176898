#include "borel/limsup.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "borel/summation.hpp"

namespace borel {

std::string to_string(TailStatus s) {
  return s == TailStatus::Converged ? "Converged" : "ToleranceNotReached";
}

TailUnionEstimate tail_union_at(const EventSequenceModel& model, Index n, Index truncation) {
  if (truncation < 0) throw std::invalid_argument("truncation must be >= 0");
  const auto profile = model.first_occurrence(n, truncation);
  TailUnionEstimate est;
  est.start = n;
  est.truncation = truncation;
  for (double t : profile.terms) checked_probability(t, "first-occurrence term");
  est.partial = std::clamp(compensated_sum(profile.terms), 0.0, 1.0);
  est.all_complement = checked_probability(profile.all_complement, "all-complement remainder");
  est.union_tail_bound = model.marginal_tail_bound(n + truncation);
  est.remainder_bound = est.all_complement;
  if (est.union_tail_bound) est.remainder_bound = std::min(est.remainder_bound, *est.union_tail_bound);
  return est;
}

TailUnionEstimate tail_union(const EventSequenceModel& model, Index n, double tol, Index k_max) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
  Index k = std::min(kInitialTruncation, k_max);
  auto est = tail_union_at(model, n, k);
  double previous = est.remainder_bound;
  while (est.remainder_bound >= tol && k < k_max) {
    k = std::min(2 * k, k_max);
    previous = est.remainder_bound;
    est = tail_union_at(model, n, k);
  }
  if (est.remainder_bound >= tol) {
    est.status = TailStatus::ToleranceNotReached;
    est.stalled = est.truncation > kInitialTruncation && est.remainder_bound > 0.99 * previous;
  }
  return est;
}

LimsupEstimate limsup_estimate(const EventSequenceModel& model, std::span<const Index> schedule,
                               double tol, Index k_max) {
  if (schedule.size() < 3) throw std::invalid_argument("schedule needs at least three points");
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1]) throw std::invalid_argument("schedule must be increasing");

  LimsupEstimate out;
  for (Index n : schedule) out.samples.push_back(tail_union(model, n, tol, k_max));
  out.alpha_upper = std::min(1.0, out.samples.back().upper());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.any_stalled = out.any_stalled || out.samples[i].stalled;
    for (std::size_t j = i + 1; j < out.samples.size(); ++j)
      if (out.samples[j].lower() > out.samples[i].upper() + 1e-12) out.monotone_consistent = false;
  }

  const auto n = out.samples.size();
  const auto& a = out.samples[n - 3];
  const auto& b = out.samples[n - 2];
  const auto& c = out.samples[n - 1];
  if (a.width() >= tol || b.width() >= tol || c.width() >= tol) {
    out.fit_diagnostic = "intervals wider than tol; reporting intervals only";
    if (out.any_stalled) out.fit_diagnostic += " (remainder bound stalled)";
    return out;
  }
  auto mid = [](const TailUnionEstimate& e) { return e.lower() + 0.5 * e.width(); };
  const double x0 = mid(a), x1 = mid(b), x2 = mid(c);
  const double d1 = x1 - x0, d2 = x2 - x1;
  std::ostringstream why;
  if (d1 == 0.0 && d2 == 0.0) {
    out.alpha_fit = x2;
    out.fit_diagnostic = "midpoints constant";
  } else if (d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) {
    out.alpha_fit = std::clamp(x2 - d2 * d2 / (d2 - d1), 0.0, 1.0);
    why << "Aitken delta-squared on midpoints, differences " << d1 << ", " << d2;
    out.fit_diagnostic = why.str();
  } else {
    why << "Aitken rejected: differences " << d1 << ", " << d2 << " are not monotonically shrinking";
    out.fit_diagnostic = why.str();
  }
  return out;
}

}  // namespace borel
