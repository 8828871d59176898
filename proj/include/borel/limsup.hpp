#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "borel/model.hpp"

namespace borel {

inline constexpr Index kInitialTruncation = 16;
inline constexpr Index kDefaultMaxTruncation = Index{1} << 16;

enum class TailStatus { Converged, ToleranceNotReached };
std::string to_string(TailStatus s);

/// Truncated first-occurrence sum for u_n = P{union of A_j, j >= n}.
///
/// `partial` sums the first `truncation` first-occurrence terms. The rest of
/// the sum is at most the all-complement probability of the same length, and
/// also at most sum_{j >= n+K} P{A_j} when the model has a closed-form bound
/// for that tail; `remainder_bound` is the smaller of the two.
struct TailUnionEstimate {
  Index start = 1;
  Index truncation = 0;
  double partial = 0.0;
  double all_complement = 1.0;
  std::optional<double> union_tail_bound;
  double remainder_bound = 1.0;
  TailStatus status = TailStatus::Converged;
  /// Last doubling of K shrank the remainder by less than 1%.
  bool stalled = false;

  double lower() const { return partial; }
  double upper() const { return partial + remainder_bound; }
  double width() const { return remainder_bound; }
};

/// Fixed truncation K.
TailUnionEstimate tail_union_at(const EventSequenceModel& model, Index n, Index truncation);

/// Doubles K from 16 until remainder_bound < tol or K reaches k_max.
TailUnionEstimate tail_union(const EventSequenceModel& model, Index n, double tol,
                             Index k_max = kDefaultMaxTruncation);

struct LimsupEstimate {
  std::vector<TailUnionEstimate> samples;
  /// Upper end of the last sample interval; P{A_n i.o.} <= alpha_upper.
  double alpha_upper = 1.0;
  /// Aitken extrapolation of the interval midpoints, when accepted.
  std::optional<double> alpha_fit;
  std::string fit_diagnostic;
  /// No later interval lies strictly above an earlier one.
  bool monotone_consistent = true;
  bool any_stalled = false;
};

/// Schedule must be strictly increasing with at least three points.
LimsupEstimate limsup_estimate(const EventSequenceModel& model, std::span<const Index> schedule,
                               double tol, Index k_max = kDefaultMaxTruncation);

}  // namespace borel
