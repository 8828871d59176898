#include "borel/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace borel {

std::vector<Slot> WindowPattern::slots() const {
  std::vector<Slot> out(static_cast<std::size_t>(span()), Slot::Complement);
  if (terminal == Terminal::Occurrence) {
    if (orientation == Orientation::PrefixComplement)
      out.back() = Slot::Event;
    else
      out.front() = Slot::Event;
  }
  return out;
}

void WindowPattern::validate() const {
  if (start < 1) throw std::invalid_argument("window start must be >= 1");
  if (prefix_len < 0) throw std::invalid_argument("window prefix length must be >= 0");
  if (terminal == Terminal::AllComplement && prefix_len < 1)
    throw std::invalid_argument("all-complement window needs prefix length >= 1");
  check_index_range(start, span());
}

std::string to_string(const WindowPattern& w) {
  std::ostringstream os;
  os << "(n=" << w.start << ", m=" << w.prefix_len << ", "
     << (w.terminal == Terminal::Occurrence ? "occurrence" : "all-complement");
  if (w.terminal == Terminal::Occurrence)
    os << ", " << (w.orientation == Orientation::PrefixComplement ? "prefix" : "suffix");
  os << ")";
  return os.str();
}

bool SeriesKind::same_series(const SeriesKind& other) const {
  const Index a = borel_cantelli ? 0 : m;
  const Index b = other.borel_cantelli ? 0 : other.m;
  if (a != b) return false;
  return a == 0 || orientation == other.orientation;
}

std::string to_string(const SeriesKind& k) {
  if (k.borel_cantelli) return "marginals";
  return "window(m=" + std::to_string(k.m) + ", " +
         (k.orientation == Orientation::PrefixComplement ? "prefix" : "suffix") + ")";
}

std::optional<SeriesClass> AnalyticMetadata::series_class(const SeriesKind& kind) const {
  for (const auto& [k, c] : series)
    if (k.same_series(kind)) return c;
  return std::nullopt;
}

void AnalyticMetadata::merge(const AnalyticMetadata& other, const std::string& path) {
  if (!other.series.empty() && other.description.empty())
    throw SpecError(path + "/description",
                    "series classifications need a closed-form argument in the description");
  if (other.marginal_limit) {
    if (*other.marginal_limit < 0 || *other.marginal_limit > 1 ||
        !std::isfinite(*other.marginal_limit))
      throw SpecError(path + "/marginal_limit", "must lie in [0,1]");
    if (marginal_limit && *marginal_limit != *other.marginal_limit)
      throw SpecError(path + "/marginal_limit", "contradicts the family's closed-form limit");
    marginal_limit = other.marginal_limit;
  }
  for (std::size_t i = 0; i < other.series.size(); ++i) {
    const auto& [kind, cls] = other.series[i];
    if (auto existing = series_class(kind)) {
      if (*existing != cls)
        throw SpecError(path + "/series/" + std::to_string(i),
                        "contradicts the family's closed-form classification");
      continue;
    }
    series.emplace_back(kind, cls);
  }
  if (!other.description.empty()) {
    if (!description.empty()) description += "; ";
    description += other.description;
  }
}

FirstOccurrenceProfile EventSequenceModel::first_occurrence(Index start, Index count) const {
  check_index_range(start, count + 1);
  FirstOccurrenceProfile out;
  out.terms.reserve(static_cast<std::size_t>(count));
  std::vector<Slot> slots;
  for (Index k = 0; k < count; ++k) {
    slots.assign(static_cast<std::size_t>(k), Slot::Complement);
    slots.push_back(Slot::Event);
    out.terms.push_back(cylinder(start, slots).prob);
  }
  slots.assign(static_cast<std::size_t>(count), Slot::Complement);
  out.all_complement = count == 0 ? 1.0 : cylinder(start, slots).prob;
  return out;
}

void check_index_range(Index start, Index len) {
  if (start < 1) throw IndexOverflow("event index must be >= 1");
  if (len < 0 || start > kMaxIndex - len + 1)
    throw IndexOverflow("window beyond index limit: start " + std::to_string(start) +
                        ", length " + std::to_string(len));
}

double checked_probability(double p, const char* where) {
  if (!std::isfinite(p)) throw NumericFault(std::string("non-finite probability in ") + where);
  return std::clamp(p, 0.0, 1.0);
}

WindowValue window_value(const EventSequenceModel& model, const WindowPattern& w) {
  w.validate();
  const auto slots = w.slots();
  auto v = model.cylinder(w.start, slots);
  v.prob = checked_probability(v.prob, "window_prob");
  return v;
}

double window_prob(const EventSequenceModel& model, const WindowPattern& w) {
  return window_value(model, w).prob;
}

double marginal_prob(const EventSequenceModel& model, Index n) {
  return window_prob(model, WindowPattern::occurrence(n, 0));
}

std::string to_string(DecayVerdict v) {
  switch (v) {
    case DecayVerdict::CertifiedZeroLimit: return "CertifiedZeroLimit";
    case DecayVerdict::LikelyZeroLimit: return "LikelyZeroLimit";
    case DecayVerdict::NotDecaying: return "NotDecaying";
    case DecayVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

DecayReport marginal_decay_check(const EventSequenceModel& model, std::span<const Index> probes,
                                 double tol) {
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (probes[i] < 1) throw std::invalid_argument("decay probes must be >= 1");
    if (i > 0 && probes[i] <= probes[i - 1])
      throw std::invalid_argument("decay probes must be strictly increasing");
  }
  DecayReport report;
  report.probes.assign(probes.begin(), probes.end());

  const auto& meta = model.metadata();
  if (meta.marginal_limit) {
    if (*meta.marginal_limit == 0.0) {
      report.verdict = DecayVerdict::CertifiedZeroLimit;
      report.justification = "closed form: lim P{A_n} = 0 [" + meta.description + "]";
    } else {
      report.verdict = DecayVerdict::NotDecaying;
      report.justification = "closed form: lim P{A_n} = " + std::to_string(*meta.marginal_limit);
    }
  }

  for (Index p : probes) {
    double best = 0.0;
    for (Index j = p; j < p + kDecayLookahead; ++j) best = std::max(best, marginal_prob(model, j));
    report.block_max.push_back(best);
  }
  if (meta.marginal_limit || probes.empty()) {
    if (probes.empty()) report.justification = "no probes";
    return report;
  }

  const auto& b = report.block_max;
  const std::size_t n = b.size();
  const std::size_t half = n / 2;
  const bool last_small = b[n - 1] < tol && (n < 2 || b[n - 2] < tol);
  bool non_increasing = b[n - 1] <= b[0];
  for (std::size_t i = half + 1; i < n; ++i) non_increasing = non_increasing && b[i] <= b[i - 1];
  const double tail_min = *std::min_element(b.begin() + static_cast<std::ptrdiff_t>(half), b.end());

  std::ostringstream why;
  if (last_small && non_increasing) {
    report.verdict = DecayVerdict::LikelyZeroLimit;
    why << "probed marginals fall below " << tol << " and are non-increasing";
  } else if (tail_min >= tol) {
    report.verdict = DecayVerdict::NotDecaying;
    why << "probed marginals stay >= " << tail_min << " over the last probes";
  } else {
    report.verdict = DecayVerdict::Inconclusive;
    why << "probed marginals neither settle below " << tol << " nor stay above it";
  }
  report.justification = why.str();
  return report;
}

std::vector<Index> default_decay_probes(Index n_max) {
  std::vector<Index> out;
  for (Index p = 10; p < n_max; p *= 10) out.push_back(p);
  if (n_max >= 1 && (out.empty() || out.back() != n_max)) out.push_back(n_max);
  return out;
}

}  // namespace borel
