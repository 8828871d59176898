#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "borel/model.hpp"

namespace borel {

class HorizonExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct OracleLimits {
  /// Cap for independent and latent-uniform models.
  Index max_horizon = 14;
  /// Cap on S^H for Markov path enumeration.
  std::uint64_t max_markov_paths = 10'000'000;
};

/// One outcome of the truncated space. Bit i of `mask` is the indicator of
/// A_{i+1}.
struct Atom {
  std::uint32_t mask = 0;
  double prob = 0.0;
};

/// Exhaustive outcome space of a model restricted to A_1..A_H.
///
/// Independent models enumerate all 2^H indicator patterns. Markov models
/// enumerate all S^H state paths and merge paths with equal indicator
/// patterns. Latent-uniform models split each latent at the sorted threshold
/// breakpoints; inside a cell every indicator is constant, so cell products
/// are exact.
class TruncatedOutcomeSpace {
 public:
  /// Throws HorizonExceeded past the caps in `limits`.
  static TruncatedOutcomeSpace build(const EventSequenceModel& model, Index horizon,
                                     const OracleLimits& limits = {});

  Index horizon() const { return horizon_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;

  /// Atom list in arbitrary order, for permutation checks.
  TruncatedOutcomeSpace with_atoms(std::vector<Atom> atoms) const;

 private:
  Index horizon_ = 0;
  std::vector<Atom> atoms_;
};

bool atom_matches(const Atom& atom, Index start, std::span<const Slot> slots);

double oracle_cylinder(const TruncatedOutcomeSpace& space, Index start, std::span<const Slot> slots);
double oracle_window_prob(const TruncatedOutcomeSpace& space, const WindowPattern& w);
/// P{ union of A_j for n <= j <= n + T }.
double oracle_union_prob(const TruncatedOutcomeSpace& space, Index n, Index t);

/// Indices of the atoms inside the window event.
std::vector<std::size_t> window_atoms(const TruncatedOutcomeSpace& space, const WindowPattern& w);

}  // namespace borel
