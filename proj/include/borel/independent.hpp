#pragma once

#include "borel/model.hpp"

namespace borel {

/// Mutually independent events with P{A_n} = p(n).
class IndependentModel final : public EventSequenceModel {
 public:
  explicit IndependentModel(ProbabilitySequence marginal, const AnalyticMetadata& extra = {});

  std::string_view family_name() const override { return "independent"; }
  WindowValue cylinder(Index start, std::span<const Slot> slots) const override;
  FirstOccurrenceProfile first_occurrence(Index start, Index count) const override;
  std::optional<double> marginal_tail_bound(Index from) const override;
  bool independent_events() const override { return true; }
  void sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const override;

  double p(Index n) const { return marginal_(n); }
  const ProbabilitySequence& marginal() const { return marginal_; }

 private:
  ProbabilitySequence marginal_;
};

}  // namespace borel
