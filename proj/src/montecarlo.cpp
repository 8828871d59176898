#include "borel/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace borel {

FrequencyEstimate wilson_interval(std::uint64_t successes, std::uint64_t samples, double confidence) {
  if (samples == 0) throw std::invalid_argument("wilson interval needs samples");
  if (successes > samples) throw std::invalid_argument("successes exceed samples");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must be in (0,1)");
  const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  FrequencyEstimate e;
  e.point = p;
  e.lower = std::clamp(std::min(center - half, p), 0.0, 1.0);
  e.upper = std::clamp(std::max(center + half, p), 0.0, 1.0);
  e.successes = successes;
  e.samples = samples;
  e.confidence = confidence;
  return e;
}

std::vector<PathSample> sample_paths(const EventSequenceModel& model, Index horizon,
                                     std::uint64_t count, std::uint64_t seed,
                                     std::uint64_t first_stream) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<PathSample> out;
  out.reserve(count);
  for (std::uint64_t block = 0; block * kPathsPerStream < count; ++block) {
    Rng rng(seed, first_stream + block);
    const std::uint64_t end = std::min(count, (block + 1) * kPathsPerStream);
    for (std::uint64_t i = block * kPathsPerStream; i < end; ++i) {
      PathSample p;
      p.horizon = horizon;
      p.seed = seed;
      p.stream = first_stream + block;
      p.position = i - block * kPathsPerStream;
      model.sample(horizon, rng, p.indicators);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<FrequencyEstimate> estimate_events(const EventSequenceModel& model, Index horizon,
                                               std::span<const PathPredicate> events,
                                               const MonteCarloConfig& config) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (config.count < 1) throw std::invalid_argument("count must be >= 1");
  const std::uint64_t blocks = (config.count + kPathsPerStream - 1) / kPathsPerStream;
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

  // Counts per worker, summed afterwards; integer addition is order-free.
  std::vector<std::vector<std::uint64_t>> counts(threads, std::vector<std::uint64_t>(events.size(), 0));
  auto work = [&](unsigned worker) {
    std::vector<std::uint8_t> path;
    auto& mine = counts[worker];
    for (std::uint64_t block = worker; block < blocks; block += threads) {
      Rng rng(config.seed, config.first_stream + block);
      const std::uint64_t end = std::min(config.count, (block + 1) * kPathsPerStream);
      for (std::uint64_t i = block * kPathsPerStream; i < end; ++i) {
        model.sample(horizon, rng, path);
        for (std::size_t e = 0; e < events.size(); ++e)
          if (events[e](path)) ++mine[e];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  std::vector<FrequencyEstimate> out;
  for (std::size_t e = 0; e < events.size(); ++e) {
    std::uint64_t total = 0;
    for (const auto& c : counts) total += c[e];
    out.push_back(wilson_interval(total, config.count, config.confidence));
  }
  return out;
}

PathPredicate window_predicate(const WindowPattern& w) {
  w.validate();
  return [start = w.start, slots = w.slots()](std::span<const std::uint8_t> path) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const bool on = path[static_cast<std::size_t>(start - 1) + i] != 0;
      if (on != (slots[i] == Slot::Event)) return false;
    }
    return true;
  };
}

PathPredicate union_predicate(Index n, Index t) {
  if (n < 1 || t < 0) throw std::invalid_argument("union range must start at n >= 1 with t >= 0");
  return [n, t](std::span<const std::uint8_t> path) {
    for (Index j = n; j <= n + t; ++j)
      if (path[static_cast<std::size_t>(j - 1)]) return true;
    return false;
  };
}

FrequencyEstimate estimate_window_prob(const EventSequenceModel& model, const WindowPattern& w,
                                       const MonteCarloConfig& config) {
  if (config.count < 100) throw std::invalid_argument("window estimates need count >= 100");
  const PathPredicate events[] = {window_predicate(w)};
  return estimate_events(model, w.last(), events, config).front();
}

FrequencyEstimate estimate_tail_union(const EventSequenceModel& model, Index n, Index t,
                                      const MonteCarloConfig& config) {
  const PathPredicate events[] = {union_predicate(n, t)};
  return estimate_events(model, n + t, events, config).front();
}

}  // namespace borel
