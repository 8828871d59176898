#pragma once

#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "borel/model.hpp"

namespace borel {

/// Time-indexed event sets E_n over the states of a finite chain.
class EventSchedule {
 public:
  using StateSet = std::vector<int>;

  static EventSchedule constant(StateSet set);
  /// E_n = sets[(n-1) mod period].
  static EventSchedule periodic(std::vector<StateSet> sets);
  /// E_n = sets[n-1] for n <= size, then `tail`.
  static EventSchedule explicit_list(std::vector<StateSet> sets, StateSet tail);

  /// Resolves the sets into 0/1 masks over `num_states` states. Throws
  /// SpecError for out-of-range or duplicate states.
  void bind(int num_states, const std::string& path = "/events");

  /// 0/1 indicator row of E_n. Requires bind().
  const Eigen::RowVectorXd& mask(Index n) const;
  const Eigen::RowVectorXd& complement_mask(Index n) const;
  bool contains(Index n, int state) const { return mask(n)(state) != 0.0; }

 private:
  enum class Kind { Periodic, Explicit };
  std::size_t slot(Index n) const;

  Kind kind_ = Kind::Periodic;
  std::vector<StateSet> sets_;
  StateSet tail_;
  std::vector<Eigen::RowVectorXd> masks_;
  std::vector<Eigen::RowVectorXd> complement_masks_;
};

/// Finite Markov chain X_1, X_2, ... with A_n = {X_n in E_n}.
///
/// Window probabilities propagate the time-n distribution through masked
/// transition steps. Distributions at each start index are cached, so a run
/// over consecutive n costs O(S^2) per new index plus O(m S^2) per window.
class MarkovModel final : public EventSequenceModel {
 public:
  /// Throws SpecError when rows or `initial` are not probability vectors
  /// (tolerance 1e-12) or the event schedule does not fit the state space.
  MarkovModel(Eigen::MatrixXd transition, Eigen::RowVectorXd initial, EventSchedule events,
              const AnalyticMetadata& extra = {});

  std::string_view family_name() const override { return "markov"; }
  WindowValue cylinder(Index start, std::span<const Slot> slots) const override;
  FirstOccurrenceProfile first_occurrence(Index start, Index count) const override;
  void sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const override;

  int num_states() const { return static_cast<int>(transition_.rows()); }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const Eigen::RowVectorXd& initial() const { return initial_; }
  const EventSchedule& events() const { return events_; }

  /// Law of X_n.
  Eigen::RowVectorXd distribution_at(Index n) const;

 private:
  struct Prefix {
    Eigen::RowVectorXd dist;
    // 1 where P{X_n = s} > 0 exactly, tracked separately from the floating
    // distribution so underflow never reads as an empty event.
    Eigen::RowVectorXd support;
  };
  Prefix prefix_at(Index n) const;

  Eigen::MatrixXd transition_;
  Eigen::MatrixXd pattern_;  // 0/1 nonzero pattern of transition_
  Eigen::RowVectorXd initial_;
  EventSchedule events_;
  std::vector<std::vector<double>> cumulative_rows_;
  std::vector<double> cumulative_initial_;

  mutable std::mutex cache_mutex_;
  mutable std::vector<Prefix> cache_;
};

}  // namespace borel
