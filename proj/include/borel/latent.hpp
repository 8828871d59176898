#pragma once

#include <vector>

#include "borel/model.hpp"

namespace borel {

/// Maps an event index to the argument of the threshold family:
/// k(n) = max(1, floor((n + shift) / stride)).
struct ThresholdIndex {
  Index stride = 1;
  Index shift = 0;
  Index operator()(Index n) const;
};

/// Independent uniform latents U_0..U_{L-1}; A_n = {U_{c(n)} <= a_n} with a
/// periodic coloring c and thresholds a_n = f(k(n)).
///
/// Every window event is a box in latent space, so its probability is the
/// product of per-latent interval lengths.
class LatentUniformModel final : public EventSequenceModel {
 public:
  /// c(n) = coloring[(n-1) mod coloring.size()].
  LatentUniformModel(int num_latents, std::vector<int> coloring, ProbabilitySequence thresholds,
                     ThresholdIndex index = {}, const AnalyticMetadata& extra = {});

  std::string_view family_name() const override { return "latent-uniform"; }
  WindowValue cylinder(Index start, std::span<const Slot> slots) const override;
  FirstOccurrenceProfile first_occurrence(Index start, Index count) const override;
  std::optional<double> marginal_tail_bound(Index from) const override;
  void sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const override;

  int num_latents() const { return num_latents_; }
  int latent_of(Index n) const {
    return coloring_[static_cast<std::size_t>((n - 1) % static_cast<Index>(coloring_.size()))];
  }
  double threshold(Index n) const { return thresholds_(index_(n)); }

  const std::vector<int>& coloring() const { return coloring_; }
  const ProbabilitySequence& thresholds() const { return thresholds_; }
  const ThresholdIndex& threshold_index() const { return index_; }

 private:
  int num_latents_;
  std::vector<int> coloring_;
  ProbabilitySequence thresholds_;
  ThresholdIndex index_;
};

/// Single latent, a_n = 1/n: A_{n+1} is a subset of A_n.
LatentUniformModel make_nested_model();

/// Two latents with alternating colors and a_n = 1/floor(n/2), so that
/// A_{2k} = {U_0 <= 1/k} and A_{2k+1} = {U_1 <= 1/k}.
LatentUniformModel make_interleaved_nested_model();

}  // namespace borel
