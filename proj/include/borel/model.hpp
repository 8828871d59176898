#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "borel/rng.hpp"
#include "borel/sequence.hpp"
#include "borel/types.hpp"

namespace borel {

/// Which series is being summed: the marginals P{A_n}, or the window terms
/// with `m` complements. Window(0) and BorelCantelli name the same series.
struct SeriesKind {
  bool borel_cantelli = true;
  Index m = 0;
  Orientation orientation = Orientation::PrefixComplement;

  static SeriesKind marginals() { return {}; }
  static SeriesKind window(Index m, Orientation o = Orientation::PrefixComplement) {
    return {false, m, o};
  }

  /// Window whose probability is the n-th term.
  WindowPattern term_window(Index n) const {
    return WindowPattern::occurrence(n, borel_cantelli ? 0 : m, orientation);
  }
  bool same_series(const SeriesKind& other) const;
};

std::string to_string(const SeriesKind& k);

/// Closed-form facts about a model. Every classification is backed by the
/// argument written in `description`.
struct AnalyticMetadata {
  std::optional<double> marginal_limit;
  std::vector<std::pair<SeriesKind, SeriesClass>> series;
  std::string description;

  std::optional<SeriesClass> series_class(const SeriesKind& kind) const;

  /// Adds entries from `other`. Throws SpecError when `other` contradicts an
  /// existing entry or carries classifications without a description.
  void merge(const AnalyticMetadata& other, const std::string& path = "/metadata");
};

/// Probability of a window plus whether the model proved it exactly zero
/// (empty event), as opposed to rounding down to zero.
struct WindowValue {
  double prob = 0.0;
  bool structural_zero = false;
};

/// First-occurrence terms P{no event at start..start+k-1, event at start+k}
/// for k = 0..K-1, followed by the all-complement probability of length K.
struct FirstOccurrenceProfile {
  std::vector<double> terms;
  double all_complement = 1.0;
};

/// Capability: exact probabilities of conjunctions of consecutive events and
/// their complements. Implementations are immutable after construction and
/// queries are pure.
class EventSequenceModel {
 public:
  virtual ~EventSequenceModel() = default;

  virtual std::string_view family_name() const = 0;

  /// P{ indicator(start + i) == slots[i] for all i }.
  virtual WindowValue cylinder(Index start, std::span<const Slot> slots) const = 0;

  /// Default builds each term through `cylinder`; backends override with an
  /// incremental sweep.
  virtual FirstOccurrenceProfile first_occurrence(Index start, Index count) const;

  /// Certified upper bound on sum_{j >= from} P{A_j}, when available.
  virtual std::optional<double> marginal_tail_bound(Index /*from*/) const {
    return std::nullopt;
  }

  /// True only when the events are mutually independent.
  virtual bool independent_events() const { return false; }

  /// Draws indicators for A_1..A_horizon into `out` (resized to horizon).
  virtual void sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const = 0;

  const AnalyticMetadata& metadata() const { return metadata_; }

 protected:
  AnalyticMetadata metadata_;
};

/// Throws IndexOverflow unless 1 <= start and start + len - 1 <= kMaxIndex.
void check_index_range(Index start, Index len);

WindowValue window_value(const EventSequenceModel& model, const WindowPattern& w);
double window_prob(const EventSequenceModel& model, const WindowPattern& w);
double marginal_prob(const EventSequenceModel& model, Index n);

/// Normalizes a computed probability: throws NumericFault when non-finite,
/// clamps rounding excursions into [0,1].
double checked_probability(double p, const char* where);

enum class DecayVerdict { CertifiedZeroLimit, LikelyZeroLimit, NotDecaying, Inconclusive };
std::string to_string(DecayVerdict v);

struct DecayReport {
  DecayVerdict verdict = DecayVerdict::Inconclusive;
  std::vector<Index> probes;
  /// max P{A_j} over a short look-ahead block starting at each probe, so
  /// periodic marginals cannot hide behind a lucky probe phase.
  std::vector<double> block_max;
  std::string justification;
};

/// Look-ahead length used per probe by marginal_decay_check.
inline constexpr Index kDecayLookahead = 16;

/// Checks the hypothesis P{A_n} -> 0. Probes must be strictly increasing.
DecayReport marginal_decay_check(const EventSequenceModel& model,
                                 std::span<const Index> probes, double tol);

/// Probes 10, 100, ... up to n_max, plus n_max itself.
std::vector<Index> default_decay_probes(Index n_max);

}  // namespace borel
