#include "borel/criteria.hpp"

#include <cmath>
#include <sstream>

#include "borel/summation.hpp"

namespace borel {

std::string to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::CertifiedConvergent: return "CertifiedConvergent";
    case VerdictKind::CertifiedDivergent: return "CertifiedDivergent";
    case VerdictKind::LikelyConvergent: return "LikelyConvergent";
    case VerdictKind::LikelyDivergent: return "LikelyDivergent";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(LemmaConclusion c) {
  switch (c) {
    case LemmaConclusion::IOProbZero: return "IOProbZero";
    case LemmaConclusion::IOProbOne: return "IOProbOne";
    case LemmaConclusion::NoConclusion: return "NoConclusion";
  }
  return "?";
}

std::string to_string(Strength s) {
  switch (s) {
    case Strength::Certified: return "certified";
    case Strength::Likely: return "likely";
    case Strength::None: return "none";
  }
  return "?";
}

std::optional<Index> SeriesReport::structural_zero_from() const {
  Index first = size() + 1;
  for (Index i = size(); i >= 1; --i) {
    if (!structural_zero[static_cast<std::size_t>(i - 1)]) break;
    first = i;
  }
  if (first > size()) return std::nullopt;
  return first;
}

std::vector<WindowValue> series_terms(const EventSequenceModel& model, const SeriesKind& kind,
                                      Index n_terms) {
  if (n_terms < 1) throw std::invalid_argument("series needs at least one term");
  if (!kind.borel_cantelli && kind.m < 0) throw std::invalid_argument("window size must be >= 0");
  std::vector<WindowValue> out;
  out.reserve(static_cast<std::size_t>(n_terms));
  for (Index n = 1; n <= n_terms; ++n) out.push_back(window_value(model, kind.term_window(n)));
  return out;
}

TailFit fit_tail(std::span<const double> terms) {
  TailFit fit;
  const auto n_terms = static_cast<Index>(terms.size());
  fit.from = std::max<Index>(1, n_terms / 10);
  fit.to = n_terms;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index n = fit.from; n <= fit.to; ++n) {
    const double t = terms[static_cast<std::size_t>(n - 1)];
    if (t <= 0.0) {
      ++fit.zero_terms;
      continue;
    }
    const double x = std::log(static_cast<double>(n)), y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++fit.points;
  }
  if (fit.points < 2) return fit;
  const double k = static_cast<double>(fit.points);
  const double denom = k * sxx - sx * sx;
  if (denom <= 0) return fit;
  fit.slope = (k * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.slope * sx) / k;
  double ss = 0;
  for (Index n = fit.from; n <= fit.to; ++n) {
    const double t = terms[static_cast<std::size_t>(n - 1)];
    if (t <= 0.0) continue;
    const double r = std::log(t) - (intercept + fit.slope * std::log(static_cast<double>(n)));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

Verdict classify(const SeriesReport& report, const AnalyticMetadata& metadata) {
  if (auto cls = metadata.series_class(report.kind)) {
    return {*cls == SeriesClass::CertifiedConvergent ? VerdictKind::CertifiedConvergent
                                                     : VerdictKind::CertifiedDivergent,
            "closed form: " + metadata.description};
  }
  if (report.size() < kMinTermsForFit)
    throw InsufficientData("classify needs " + std::to_string(kMinTermsForFit) +
                           " terms or closed-form metadata, got " + std::to_string(report.size()));

  const auto& tail = report.tail;
  const Index tail_len = tail.to - tail.from + 1;
  std::ostringstream why;
  if (2 * tail.zero_terms > tail_len) {
    const auto zero_from = report.structural_zero_from();
    if (zero_from && *zero_from <= tail.from) {
      why << "eventually zero terms: every window event from n = " << *zero_from << " to "
          << report.size() << " is empty";
      return {VerdictKind::CertifiedConvergent, why.str()};
    }
    why << tail.zero_terms << " of " << tail_len
        << " tail terms are zero without a proof of emptiness";
    return {VerdictKind::LikelyConvergent, why.str()};
  }
  if (tail.points < 2) return {VerdictKind::Inconclusive, "too few positive tail terms to fit"};

  why << "tail log-log slope " << tail.slope << " (rms residual " << tail.residual << ") over n in ["
      << tail.from << ", " << tail.to << "]";
  if (tail.slope < kConvergentSlope) return {VerdictKind::LikelyConvergent, why.str()};
  if (tail.slope > kDivergentSlope) return {VerdictKind::LikelyDivergent, why.str()};
  why << " is within the p-series boundary band";
  return {VerdictKind::Inconclusive, why.str()};
}

SeriesReport series_report(const EventSequenceModel& model, const SeriesKind& kind, Index n_terms) {
  SeriesReport r;
  r.kind = kind;
  const auto values = series_terms(model, kind, n_terms);
  r.terms.reserve(values.size());
  r.structural_zero.reserve(values.size());
  r.partial_sums.reserve(values.size());
  CompensatedSum acc;
  for (const auto& v : values) {
    r.terms.push_back(v.prob);
    r.structural_zero.push_back(v.structural_zero ? 1 : 0);
    acc += v.prob;
    r.partial_sums.push_back(acc.value());
  }
  r.tail = fit_tail(r.terms);
  if (r.size() >= kMinTermsForFit || model.metadata().series_class(kind))
    r.verdict = classify(r, model.metadata());
  else
    r.verdict = {VerdictKind::Inconclusive, "fewer than " + std::to_string(kMinTermsForFit) + " terms"};
  return r;
}

LemmaResult check_lemma(const EventSequenceModel& model, Index m, Index n_terms, double tol,
                        Orientation orientation) {
  if (m < 0) throw std::invalid_argument("m must be >= 0");
  LemmaResult res;
  res.m = m;
  const SeriesKind kind = m == 0 ? SeriesKind::marginals() : SeriesKind::window(m, orientation);
  res.series = series_report(model, kind, n_terms);
  const auto probes = default_decay_probes(n_terms);
  res.decay = marginal_decay_check(model, probes, tol);

  const Verdict& v = res.series.verdict;
  std::string& why = res.series.provenance;
  if (m == 0) {
    if (v.convergent()) {
      res.conclusion = LemmaConclusion::IOProbZero;
      res.strength = v.certified() ? Strength::Certified : Strength::Likely;
      why = "first Borel-Cantelli lemma: sum of P{A_n} converges";
    } else if (v.divergent() && model.independent_events()) {
      res.conclusion = LemmaConclusion::IOProbOne;
      res.strength = v.certified() ? Strength::Certified : Strength::Likely;
      why = "second Borel-Cantelli lemma: independent events with divergent sum of P{A_n}";
    } else {
      why = v.divergent() ? "sum of P{A_n} diverges and the events are not known to be independent"
                          : "marginal series undecided";
    }
  } else {
    const bool decays = res.decay.verdict == DecayVerdict::CertifiedZeroLimit ||
                        res.decay.verdict == DecayVerdict::LikelyZeroLimit;
    const std::string criterion = m == 1 ? "Barndorff-Nielsen criterion"
                                         : "window criterion with m = " + std::to_string(m);
    if (decays && v.convergent()) {
      res.conclusion = LemmaConclusion::IOProbZero;
      res.strength = (v.certified() && res.decay.verdict == DecayVerdict::CertifiedZeroLimit)
                         ? Strength::Certified
                         : Strength::Likely;
      why = criterion + ": P{A_n} -> 0 and the window series converges";
    } else if (!decays) {
      why = criterion + " not applicable: P{A_n} -> 0 not established (" +
            to_string(res.decay.verdict) + ")";
    } else {
      why = criterion + " not satisfied: window series verdict " + to_string(v.kind);
    }
  }
  res.series.conclusion = res.conclusion;
  return res;
}

SweepResult sweep_m(const EventSequenceModel& model, Index m_max, Index n_terms, double tol,
                    Index m_bound) {
  if (m_max < 0 || m_max > m_bound)
    throw std::invalid_argument("m_max must lie in [0, " + std::to_string(m_bound) + "]");
  SweepResult out;
  for (Index m = 0; m <= m_max; ++m) {
    out.results.push_back(check_lemma(model, m, n_terms, tol));
    const auto& r = out.results.back();
    if (r.conclusion != LemmaConclusion::IOProbZero) continue;
    if (!out.least_m) out.least_m = m;
    if (!out.least_certified_m && r.strength == Strength::Certified) out.least_certified_m = m;
  }
  return out;
}

}  // namespace borel
