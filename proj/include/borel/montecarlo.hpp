#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "borel/model.hpp"

namespace borel {

/// Paths drawn consecutively from one (seed, stream) generator.
inline constexpr std::uint64_t kPathsPerStream = 1024;

struct PathSample {
  Index horizon = 0;
  std::vector<std::uint8_t> indicators;  // indicators[i] is A_{i+1}
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t position = 0;  // index within the stream
};

struct FrequencyEstimate {
  double point = 0.0;
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t successes = 0;
  std::uint64_t samples = 0;
  double confidence = 0.95;
};

/// Wilson score interval.
FrequencyEstimate wilson_interval(std::uint64_t successes, std::uint64_t samples, double confidence);

struct MonteCarloConfig {
  std::uint64_t count = 100'000;
  std::uint64_t seed = 1;
  double confidence = 0.95;
  /// Stream index of the first block of paths.
  std::uint64_t first_stream = 0;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Path i comes from stream first_stream + i / kPathsPerStream.
std::vector<PathSample> sample_paths(const EventSequenceModel& model, Index horizon,
                                     std::uint64_t count, std::uint64_t seed,
                                     std::uint64_t first_stream = 0);

using PathPredicate = std::function<bool(std::span<const std::uint8_t>)>;

/// One pass over `config.count` paths of length `horizon`, counting each
/// predicate. Result is independent of the thread count.
std::vector<FrequencyEstimate> estimate_events(const EventSequenceModel& model, Index horizon,
                                               std::span<const PathPredicate> events,
                                               const MonteCarloConfig& config);

PathPredicate window_predicate(const WindowPattern& w);
PathPredicate union_predicate(Index n, Index t);

FrequencyEstimate estimate_window_prob(const EventSequenceModel& model, const WindowPattern& w,
                                       const MonteCarloConfig& config);

/// Frequency that some A_j fires for n <= j <= n + t.
FrequencyEstimate estimate_tail_union(const EventSequenceModel& model, Index n, Index t,
                                      const MonteCarloConfig& config);

}  // namespace borel
