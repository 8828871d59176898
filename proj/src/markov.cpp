#include "borel/markov.hpp"

#include <algorithm>
#include <cmath>

namespace borel {
namespace {

constexpr double kStochasticTol = 1e-12;

Eigen::RowVectorXd support_step(const Eigen::RowVectorXd& support, const Eigen::MatrixXd& pattern) {
  return ((support * pattern).array() > 0.0).cast<double>().matrix();
}

std::vector<double> cumulative(const Eigen::RowVectorXd& row) {
  std::vector<double> out(static_cast<std::size_t>(row.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < row.size(); ++i) out[static_cast<std::size_t>(i)] = acc += row(i);
  return out;
}

int draw(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cum.begin(),
                                                   static_cast<std::ptrdiff_t>(cum.size()) - 1));
}

void check_probability_vector(const Eigen::RowVectorXd& v, const std::string& field) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!std::isfinite(v(j)) || v(j) < 0.0)
      throw SpecError(field + "/" + std::to_string(j), "must be a finite nonnegative probability");
  }
  const double s = v.sum();
  if (std::abs(s - 1.0) > kStochasticTol)
    throw SpecError(field, "sums to " + std::to_string(s) + ", expected 1 within 1e-12");
}

}  // namespace

EventSchedule EventSchedule::constant(StateSet set) { return periodic({std::move(set)}); }

EventSchedule EventSchedule::periodic(std::vector<StateSet> sets) {
  EventSchedule e;
  e.kind_ = Kind::Periodic;
  e.sets_ = std::move(sets);
  return e;
}

EventSchedule EventSchedule::explicit_list(std::vector<StateSet> sets, StateSet tail) {
  EventSchedule e;
  e.kind_ = Kind::Explicit;
  e.sets_ = std::move(sets);
  e.tail_ = std::move(tail);
  return e;
}

void EventSchedule::bind(int num_states, const std::string& path) {
  if (kind_ == Kind::Periodic && sets_.empty())
    throw SpecError(path, "periodic schedule needs at least one set");
  auto make = [&](const StateSet& set, const std::string& field) {
    Eigen::RowVectorXd m = Eigen::RowVectorXd::Zero(num_states);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const int s = set[i];
      if (s < 0 || s >= num_states)
        throw SpecError(field + "/" + std::to_string(i), "state out of range");
      if (m(s) != 0.0) throw SpecError(field + "/" + std::to_string(i), "duplicate state");
      m(s) = 1.0;
    }
    return m;
  };
  masks_.clear();
  complement_masks_.clear();
  for (std::size_t i = 0; i < sets_.size(); ++i)
    masks_.push_back(make(sets_[i], path + "/sets/" + std::to_string(i)));
  if (kind_ == Kind::Explicit) masks_.push_back(make(tail_, path + "/tail"));
  for (const auto& m : masks_)
    complement_masks_.push_back(Eigen::RowVectorXd::Ones(num_states) - m);
}

std::size_t EventSchedule::slot(Index n) const {
  if (n < 1) throw IndexOverflow("event index must be >= 1");
  if (kind_ == Kind::Periodic) return static_cast<std::size_t>((n - 1) % static_cast<Index>(sets_.size()));
  return n <= static_cast<Index>(sets_.size()) ? static_cast<std::size_t>(n - 1) : sets_.size();
}

const Eigen::RowVectorXd& EventSchedule::mask(Index n) const { return masks_.at(slot(n)); }
const Eigen::RowVectorXd& EventSchedule::complement_mask(Index n) const {
  return complement_masks_.at(slot(n));
}

MarkovModel::MarkovModel(Eigen::MatrixXd transition, Eigen::RowVectorXd initial,
                         EventSchedule events, const AnalyticMetadata& extra)
    : transition_(std::move(transition)), initial_(std::move(initial)), events_(std::move(events)) {
  const auto s = transition_.rows();
  if (s < 1 || transition_.cols() != s) throw SpecError("/transition", "must be a non-empty square matrix");
  for (Eigen::Index i = 0; i < s; ++i)
    check_probability_vector(transition_.row(i), "/transition/" + std::to_string(i));
  if (initial_.size() != s) throw SpecError("/initial", "length must equal the number of states");
  check_probability_vector(initial_, "/initial");
  events_.bind(static_cast<int>(s));

  pattern_ = (transition_.array() > 0.0).cast<double>().matrix();
  for (Eigen::Index i = 0; i < s; ++i) cumulative_rows_.push_back(cumulative(transition_.row(i)));
  cumulative_initial_ = cumulative(initial_);

  metadata_.description = "finite Markov chain with " + std::to_string(s) + " states";
  metadata_.merge(extra);
}

Eigen::RowVectorXd MarkovModel::distribution_at(Index n) const { return prefix_at(n).dist; }

MarkovModel::Prefix MarkovModel::prefix_at(Index n) const {
  check_index_range(n, 1);
  std::lock_guard lock(cache_mutex_);
  if (cache_.empty())
    cache_.push_back({initial_, (initial_.array() > 0.0).cast<double>().matrix()});
  while (static_cast<Index>(cache_.size()) < n) {
    const Prefix& last = cache_.back();
    Prefix next{last.dist * transition_, support_step(last.support, pattern_)};
    if (!next.dist.allFinite()) throw NumericFault("markov prefix propagation");
    cache_.push_back(std::move(next));
  }
  return cache_[static_cast<std::size_t>(n - 1)];
}

WindowValue MarkovModel::cylinder(Index start, std::span<const Slot> slots) const {
  check_index_range(start, static_cast<Index>(slots.size()));
  if (slots.empty()) return {1.0, false};
  auto [v, support] = prefix_at(start);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Index n = start + static_cast<Index>(i);
    const auto& mask =
        slots[i] == Slot::Event ? events_.mask(n) : events_.complement_mask(n);
    v = v.cwiseProduct(mask);
    support = support.cwiseProduct(mask);
    if (support.sum() == 0.0) return {0.0, true};
    if (i + 1 < slots.size()) {
      v = v * transition_;
      support = support_step(support, pattern_);
    }
  }
  const double p = v.sum();
  if (!std::isfinite(p)) throw NumericFault("markov cylinder");
  return {p, false};
}

FirstOccurrenceProfile MarkovModel::first_occurrence(Index start, Index count) const {
  check_index_range(start, count + 1);
  FirstOccurrenceProfile out;
  out.terms.reserve(static_cast<std::size_t>(count));
  auto [v, support] = prefix_at(start);
  for (Index k = 0; k < count; ++k) {
    const Index n = start + k;
    const auto& hit = events_.mask(n);
    const bool hit_possible = support.cwiseProduct(hit).sum() > 0.0;
    out.terms.push_back(hit_possible ? v.cwiseProduct(hit).sum() : 0.0);

    const auto& miss = events_.complement_mask(n);
    v = v.cwiseProduct(miss);
    support = support.cwiseProduct(miss);
    if (support.sum() == 0.0) {
      out.terms.resize(static_cast<std::size_t>(count), 0.0);
      out.all_complement = 0.0;
      return out;
    }
    if (k + 1 < count) {
      v = v * transition_;
      support = support_step(support, pattern_);
    }
  }
  out.all_complement = count == 0 ? 1.0 : v.sum();
  if (!std::isfinite(out.all_complement)) throw NumericFault("markov first-occurrence sweep");
  return out;
}

void MarkovModel::sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const {
  out.resize(static_cast<std::size_t>(horizon));
  if (horizon < 1) return;
  int x = draw(cumulative_initial_, rng.uniform());
  for (Index n = 1; n <= horizon; ++n) {
    out[static_cast<std::size_t>(n - 1)] = events_.contains(n, x) ? 1 : 0;
    if (n < horizon) x = draw(cumulative_rows_[static_cast<std::size_t>(x)], rng.uniform());
  }
}

}  // namespace borel
