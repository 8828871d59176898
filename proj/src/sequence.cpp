#include "borel/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace borel {
namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Relative slack added to closed-form tail bounds to absorb rounding.
constexpr double kBoundSlack = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_finite(double x, const std::string& field) {
  if (!std::isfinite(x)) throw SpecError(field, "must be finite");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(SeriesClass c) {
  return c == SeriesClass::CertifiedConvergent ? "CertifiedConvergent" : "CertifiedDivergent";
}

ProbabilitySequence::ProbabilitySequence(Family family, const std::string& path)
    : family_(std::move(family)) {
  std::visit(overloaded{
                 [&](const Constant& f) { require_finite(f.c, path + "/c"); },
                 [&](const PowerLaw& f) {
                   require_finite(f.c, path + "/c");
                   require_finite(f.s, path + "/s");
                   if (f.c < 0) throw SpecError(path + "/c", "must be >= 0");
                 },
                 [&](const LogPower& f) {
                   require_finite(f.c, path + "/c");
                   require_finite(f.s, path + "/s");
                   if (f.c < 0) throw SpecError(path + "/c", "must be >= 0");
                 },
                 [&](const ExplicitList& f) {
                   for (std::size_t i = 0; i < f.values.size(); ++i) {
                     const auto field = path + "/values/" + std::to_string(i);
                     require_finite(f.values[i], field);
                     if (f.values[i] < 0 || f.values[i] > 1)
                       throw SpecError(field, "must lie in [0,1]");
                   }
                   require_finite(f.tail, path + "/tail");
                   if (f.tail < 0 || f.tail > 1) throw SpecError(path + "/tail", "must lie in [0,1]");
                 },
             },
             family_);
}

double ProbabilitySequence::raw(Index k) const {
  const double x = static_cast<double>(k);
  return std::visit(
      overloaded{
          [&](const Constant& f) { return f.c; },
          [&](const PowerLaw& f) { return f.c == 0 ? 0.0 : f.c * std::pow(x, -f.s); },
          [&](const LogPower& f) {
            return f.c == 0 ? 0.0 : f.c / (x * std::pow(std::log1p(x), f.s));
          },
          [&](const ExplicitList& f) {
            return k <= static_cast<Index>(f.values.size())
                       ? f.values[static_cast<std::size_t>(k - 1)]
                       : f.tail;
          },
      },
      family_);
}

double ProbabilitySequence::operator()(Index k) const {
  if (k < 1) throw IndexOverflow("sequence index must be >= 1");
  const double v = raw(k);
  if (std::isnan(v)) throw NumericFault("sequence value is NaN at k=" + std::to_string(k));
  return clamp01(v);
}

double ProbabilitySequence::limit() const {
  return std::visit(overloaded{
                        [](const Constant& f) { return clamp01(f.c); },
                        [](const PowerLaw& f) {
                          if (f.c == 0 || f.s > 0) return 0.0;
                          if (f.s == 0) return clamp01(f.c);
                          return 1.0;
                        },
                        [](const LogPower&) { return 0.0; },
                        [](const ExplicitList& f) { return f.tail; },
                    },
                    family_);
}

SeriesClass ProbabilitySequence::sum_class() const {
  using enum SeriesClass;
  return std::visit(overloaded{
                        [](const Constant& f) { return f.c > 0 ? CertifiedDivergent : CertifiedConvergent; },
                        [](const PowerLaw& f) {
                          return (f.c == 0 || f.s > 1) ? CertifiedConvergent : CertifiedDivergent;
                        },
                        [](const LogPower& f) {
                          return (f.c == 0 || f.s > 1) ? CertifiedConvergent : CertifiedDivergent;
                        },
                        [](const ExplicitList& f) {
                          return f.tail > 0 ? CertifiedDivergent : CertifiedConvergent;
                        },
                    },
                    family_);
}

std::optional<double> ProbabilitySequence::tail_sum_bound(Index from) const {
  if (from < 1) from = 1;
  if (sum_class() == SeriesClass::CertifiedDivergent) return std::nullopt;
  const double m = static_cast<double>(from);
  const double bound = std::visit(
      overloaded{
          [](const Constant&) { return 0.0; },
          [&](const PowerLaw& f) {
            if (f.c == 0) return 0.0;
            // f decreasing: sum_{k>=M} f(k) <= f(M) + int_M^inf c x^-s dx
            return (*this)(from) + f.c * std::pow(m, 1 - f.s) / (f.s - 1);
          },
          [&](const LogPower& f) {
            if (f.c == 0) return 0.0;
            // c/(k ln(k+1)^s) <= c/(k ln(k)^s), decreasing for k >= 2;
            // int_M^inf c/(x ln(x)^s) dx = c ln(M)^(1-s)/(s-1).
            const Index start = std::max<Index>(from, 2);
            const double head = from < 2 ? (*this)(1) : 0.0;
            const double ms = static_cast<double>(start);
            return head + (*this)(start) + f.c * std::pow(std::log(ms), 1 - f.s) / (f.s - 1);
          },
          [&](const ExplicitList& f) {
            double s = 0.0;
            for (std::size_t i = static_cast<std::size_t>(from - 1); i < f.values.size(); ++i)
              s += f.values[i];
            return s;
          },
      },
      family_);
  return bound * (1 + kBoundSlack);
}

bool ProbabilitySequence::eventually_one() const { return limit() == 1.0; }

bool ProbabilitySequence::non_increasing() const {
  return std::visit(overloaded{
                        [](const Constant&) { return true; },
                        [](const PowerLaw& f) { return f.c == 0 || f.s >= 0; },
                        [](const LogPower& f) { return f.c == 0 || f.s >= 0; },
                        [](const ExplicitList& f) {
                          for (std::size_t i = 1; i < f.values.size(); ++i)
                            if (f.values[i] > f.values[i - 1]) return false;
                          return f.values.empty() || f.tail <= f.values.back();
                        },
                    },
                    family_);
}

std::string ProbabilitySequence::describe() const {
  std::string text = std::visit(
      overloaded{
          [](const Constant& f) { return "constant " + fmt(f.c); },
          [](const PowerLaw& f) { return fmt(f.c) + "*k^-" + fmt(f.s); },
          [](const LogPower& f) { return fmt(f.c) + "/(k*ln(k+1)^" + fmt(f.s) + ")"; },
          [](const ExplicitList& f) {
            return "explicit list of " + std::to_string(f.values.size()) + " values, tail " +
                   fmt(f.tail);
          },
      },
      family_);
  const auto note = clamp_note();
  if (!note.empty()) text += " (" + note + ")";
  return text;
}

std::string ProbabilitySequence::clamp_note() const {
  return std::visit(overloaded{
                        [](const Constant& f) -> std::string {
                          return (f.c < 0 || f.c > 1) ? "clamped to [0,1] everywhere" : "";
                        },
                        [&](const PowerLaw& f) -> std::string {
                          if (f.c <= 1 || f.s < 0) {
                            if (f.s < 0 && f.c > 0) return "clamped to 1 once c*k^-s exceeds 1";
                            return "";
                          }
                          if (f.s == 0) return "clamped to 1 everywhere";
                          const double kstar = std::pow(f.c, 1 / f.s);
                          return "clamped to 1 for k < " + fmt(kstar);
                        },
                        [&](const LogPower&) -> std::string {
                          return raw(1) > 1 ? "clamped to 1 where the formula exceeds 1" : "";
                        },
                        [](const ExplicitList&) -> std::string { return ""; },
                    },
                    family_);
}

}  // namespace borel
