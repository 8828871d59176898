#include "borel/independent.hpp"

#include <cmath>
#include <sstream>

#include "borel/family_metadata.hpp"

namespace borel {

std::string sum_argument(const ProbabilitySequence& seq) {
  using PS = ProbabilitySequence;
  const auto& fam = seq.family();
  std::ostringstream os;
  if (const auto* f = std::get_if<PS::PowerLaw>(&fam)) {
    if (f->c == 0)
      os << "all terms zero";
    else
      os << "p-series comparison with exponent " << f->s
         << (f->s > 1 ? " > 1 converges" : " <= 1 diverges");
  } else if (const auto* f = std::get_if<PS::LogPower>(&fam)) {
    if (f->c == 0)
      os << "all terms zero";
    else
      os << "integral test for 1/(k ln(k)^s) with s = " << f->s
         << (f->s > 1 ? " > 1 converges" : " <= 1 diverges");
  } else if (const auto* f = std::get_if<PS::Constant>(&fam)) {
    os << (f->c > 0 ? "constant positive terms diverge" : "all terms zero");
  } else if (const auto* f = std::get_if<PS::ExplicitList>(&fam)) {
    os << (f->tail > 0 ? "constant positive tail diverges" : "finitely many nonzero terms");
  }
  return os.str();
}

AnalyticMetadata sequence_marginal_metadata(const ProbabilitySequence& seq, std::string_view what) {
  AnalyticMetadata meta;
  meta.marginal_limit = seq.limit();
  meta.series.emplace_back(SeriesKind::marginals(), seq.sum_class());
  std::ostringstream os;
  os << what << " = " << seq.describe() << "; lim = " << seq.limit() << "; sum "
     << (seq.sum_class() == SeriesClass::CertifiedConvergent ? "converges" : "diverges") << " ("
     << sum_argument(seq) << ")";
  meta.description = os.str();
  return meta;
}

namespace {

AnalyticMetadata independent_metadata(const ProbabilitySequence& seq) {
  auto meta = sequence_marginal_metadata(seq, "independent events, p_n");
  const double lim = seq.limit();
  const bool sum_converges = seq.sum_class() == SeriesClass::CertifiedConvergent;

  SeriesClass window_class;
  std::string why;
  if (sum_converges) {
    window_class = SeriesClass::CertifiedConvergent;
    why = "window terms are bounded by a marginal term";
  } else if (lim > 0 && lim < 1) {
    window_class = SeriesClass::CertifiedDivergent;
    why = "window terms tend to (1-L)^m L > 0";
  } else if (lim == 1) {
    window_class = SeriesClass::CertifiedConvergent;
    why = "p_n is eventually exactly 1, so window terms are eventually zero";
  } else {
    window_class = SeriesClass::CertifiedDivergent;
    why = "p_n -> 0 makes (1-p)^m >= 1/2 eventually, so window terms dominate half a divergent "
          "marginal series";
  }
  for (Index m = 1; m <= kMetadataMaxWindow; ++m) {
    meta.series.emplace_back(SeriesKind::window(m, Orientation::PrefixComplement), window_class);
    meta.series.emplace_back(SeriesKind::window(m, Orientation::SuffixComplement), window_class);
  }
  meta.description += "; windows m >= 1: " + why;
  return meta;
}

}  // namespace

IndependentModel::IndependentModel(ProbabilitySequence marginal, const AnalyticMetadata& extra)
    : marginal_(std::move(marginal)) {
  metadata_ = independent_metadata(marginal_);
  metadata_.merge(extra);
}

WindowValue IndependentModel::cylinder(Index start, std::span<const Slot> slots) const {
  check_index_range(start, static_cast<Index>(slots.size()));
  WindowValue v{1.0, false};
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const double p = marginal_(start + static_cast<Index>(i));
    const double f = slots[i] == Slot::Event ? p : 1.0 - p;
    if (f == 0.0) return {0.0, true};
    v.prob *= f;
  }
  if (!std::isfinite(v.prob)) throw NumericFault("independent cylinder");
  return v;
}

FirstOccurrenceProfile IndependentModel::first_occurrence(Index start, Index count) const {
  check_index_range(start, count + 1);
  FirstOccurrenceProfile out;
  out.terms.reserve(static_cast<std::size_t>(count));
  double none_yet = 1.0;
  for (Index k = 0; k < count; ++k) {
    const double p = marginal_(start + k);
    out.terms.push_back(none_yet * p);
    none_yet *= 1.0 - p;
  }
  out.all_complement = none_yet;
  return out;
}

std::optional<double> IndependentModel::marginal_tail_bound(Index from) const {
  return marginal_.tail_sum_bound(from);
}

void IndependentModel::sample(Index horizon, Rng& rng, std::vector<std::uint8_t>& out) const {
  out.resize(static_cast<std::size_t>(horizon));
  for (Index n = 1; n <= horizon; ++n)
    out[static_cast<std::size_t>(n - 1)] = rng.uniform() < marginal_(n) ? 1 : 0;
}

}  // namespace borel
