#include "borel/latent.hpp"

#include <algorithm>
#include <cmath>

#include "borel/family_metadata.hpp"

namespace borel {

Index ThresholdIndex::operator()(Index n) const { return std::max<Index>(1, (n + shift) / stride); }

LatentUniformModel::LatentUniformModel(int num_latents, std::vector<int> coloring,
                                       ProbabilitySequence thresholds, ThresholdIndex index,
                                       const AnalyticMetadata& extra)
    : num_latents_(num_latents),
      coloring_(std::move(coloring)),
      thresholds_(std::move(thresholds)),
      index_(index) {
  if (num_latents_ < 1) throw SpecError("/latents", "must be >= 1");
  if (coloring_.empty()) throw SpecError("/coloring", "must not be empty");
  for (std::size_t i = 0; i < coloring_.size(); ++i)
    if (coloring_[i] < 0 || coloring_[i] >= num_latents_)
      throw SpecError("/coloring/" + std::to_string(i), "latent index out of range");
  if (index_.stride < 1) throw SpecError("/threshold_index/stride", "must be >= 1");
  if (index_.shift < 0) throw SpecError("/threshold_index/shift", "must be >= 0");

  metadata_ = sequence_marginal_metadata(thresholds_, "latent thresholds a_n");
  metadata_.merge(extra);
}

WindowValue LatentUniformModel::cylinder(Index start, std::span<const Slot> slots) const {
  check_index_range(start, static_cast<Index>(slots.size()));
  std::vector<double> lo(static_cast<std::size_t>(num_latents_), 0.0);
  std::vector<double> hi(static_cast<std::size_t>(num_latents_), 1.0);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Index n = start + static_cast<Index>(i);
    const auto c = static_cast<std::size_t>(latent_of(n));
    const double a = threshold(n);
    if (slots[i] == Slot::Event)
      hi[c] = std::min(hi[c], a);
    else
      lo[c] = std::max(lo[c], a);
    if (hi[c] <= lo[c]) return {0.0, true};
  }
  double p = 1.0;
  for (int l = 0; l < num_latents_; ++l) p *= hi[static_cast<std::size_t>(l)] - lo[static_cast<std::size_t>(l)];
  return {p, false};
}

FirstOccurrenceProfile LatentUniformModel::first_occurrence(Index start, Index count) const {
  check_index_range(start, count + 1);
  FirstOccurrenceProfile out;
  out.terms.reserve(static_cast<std::size_t>(count));
  // Only complements accumulate, so each latent is confined to (lo, 1].
  std::vector<double> lo(static_cast<std::size_t>(num_latents_), 0.0);
  auto mass_except = [&](std::size_t skip) {
    double p = 1.0;
    for (std::size_t l = 0; l < lo.size(); ++l)
      if (l != skip) p *= 1.0 - lo[l];
    return p;
  };
  for (Index k = 0; k < count; ++k) {
    const Index n = start + k;
    const auto c = static_cast<std::size_t>(latent_of(n));
    const double a = threshold(n);
    out.terms.push_back(a > lo[c] ? (a - lo[c]) * mass_except(c) : 0.0);
    lo[c] = std::max(lo[c], a);
  }
  out.all_complement = mass_except(lo.size());
  return out;
}

std::optional<double> LatentUniformModel::marginal_tail_bound(Index from) const {
  const Index k = index_(from);
  if (k >= 2) {
    auto t = thresholds_.tail_sum_bound(k);
    if (!t) return std::nullopt;
    return static_cast<double>(index_.stride) * *t;
  }
  // Indices n >= from with k(n) == 1 satisfy n + shift < 2 * stride.
  const Index first_block = std::max<Index>(0, 2 * index_.stride - index_.shift - from);
  auto t = thresholds_.tail_sum_bound(2);
  if (!t) return std::nullopt;
  return static_cast<double>(first_block) * thresholds_(1) + static_cast<double>(index_.stride) * *t;
}

void LatentUniformModel::sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const {
  std::vector<double> u(static_cast<std::size_t>(num_latents_));
  for (auto& x : u) x = rng.uniform();
  out.resize(static_cast<std::size_t>(horizon));
  for (Index n = 1; n <= horizon; ++n)
    out[static_cast<std::size_t>(n - 1)] =
        u[static_cast<std::size_t>(latent_of(n))] <= threshold(n) ? 1 : 0;
}

LatentUniformModel make_nested_model() {
  return LatentUniformModel(1, {0}, ProbabilitySequence::power_law(1.0, 1.0));
}

LatentUniformModel make_interleaved_nested_model() {
  return LatentUniformModel(2, {1, 0}, ProbabilitySequence::power_law(1.0, 1.0),
                            ThresholdIndex{2, 0});
}

}  // namespace borel
