#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "borel/model.hpp"

namespace borel {

enum class VerdictKind {
  CertifiedConvergent,
  CertifiedDivergent,
  LikelyConvergent,
  LikelyDivergent,
  Inconclusive,
};
std::string to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string justification;

  bool convergent() const {
    return kind == VerdictKind::CertifiedConvergent || kind == VerdictKind::LikelyConvergent;
  }
  bool divergent() const {
    return kind == VerdictKind::CertifiedDivergent || kind == VerdictKind::LikelyDivergent;
  }
  bool certified() const {
    return kind == VerdictKind::CertifiedConvergent || kind == VerdictKind::CertifiedDivergent;
  }
};

enum class LemmaConclusion { IOProbZero, IOProbOne, NoConclusion };
std::string to_string(LemmaConclusion c);

enum class Strength { Certified, Likely, None };
std::string to_string(Strength s);

/// Thrown by classify when neither enough terms nor metadata are available.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Terms needed before the numeric rules of classify apply.
inline constexpr Index kMinTermsForFit = 100;
/// Log-log slope band around the p-series boundary.
inline constexpr double kConvergentSlope = -1.1;
inline constexpr double kDivergentSlope = -0.9;
/// Default and hard bound for sweep_m.
inline constexpr Index kDefaultMaxWindow = 8;

/// Least-squares fit of log(term) against log(n) over the last decade
/// [N/10, N], skipping zero terms.
struct TailFit {
  Index from = 0;
  Index to = 0;
  Index points = 0;
  Index zero_terms = 0;
  double slope = 0.0;
  double residual = 0.0;  // RMS in log space
};

struct SeriesReport {
  SeriesKind kind;
  std::vector<double> terms;  // terms[i] is the term at n = i + 1
  std::vector<std::uint8_t> structural_zero;
  std::vector<double> partial_sums;
  TailFit tail;
  Verdict verdict;
  LemmaConclusion conclusion = LemmaConclusion::NoConclusion;
  std::string provenance;

  Index size() const { return static_cast<Index>(terms.size()); }
  /// First index from which every evaluated term is a proven-empty window,
  /// if the series ends in such a run.
  std::optional<Index> structural_zero_from() const;
};

/// term[n] = window_prob(n, m, Occurrence, orientation), or P{A_n} for the
/// marginal series, for n = 1..N.
std::vector<WindowValue> series_terms(const EventSequenceModel& model, const SeriesKind& kind, Index n_terms);

TailFit fit_tail(std::span<const double> terms);

/// Verdict for an evaluated report. Metadata classifications come first;
/// the numeric rules need at least kMinTermsForFit terms.
Verdict classify(const SeriesReport& report, const AnalyticMetadata& metadata);

/// Evaluates terms, compensated partial sums, tail fit and verdict.
SeriesReport series_report(const EventSequenceModel& model, const SeriesKind& kind, Index n_terms);

struct LemmaResult {
  Index m = 0;
  LemmaConclusion conclusion = LemmaConclusion::NoConclusion;
  Strength strength = Strength::None;
  DecayReport decay;
  SeriesReport series;
};

/// Applies the window criterion with m leading complements: P{A_n i.o.} = 0
/// when P{A_n} -> 0 and the window series converges. m = 0 is the first
/// Borel-Cantelli lemma and needs no decay hypothesis; for independent
/// events a divergent marginal series gives P{A_n i.o.} = 1.
LemmaResult check_lemma(const EventSequenceModel& model, Index m, Index n_terms, double tol,
                        Orientation orientation = Orientation::PrefixComplement);

struct SweepResult {
  std::vector<LemmaResult> results;  // indexed by m
  std::optional<Index> least_m;           // least m with IOProbZero
  std::optional<Index> least_certified_m;  // least m with certified IOProbZero
};

SweepResult sweep_m(const EventSequenceModel& model, Index m_max, Index n_terms, double tol,
                    Index m_bound = kDefaultMaxWindow);

}  // namespace borel
