#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "borel/types.hpp"

namespace borel {

/// Closed-form convergence class of a nonnegative series.
enum class SeriesClass { CertifiedConvergent, CertifiedDivergent };

std::string to_string(SeriesClass c);

/// A sequence of probabilities f(1), f(2), ... given by a closed-form family.
///
/// Formulas that leave [0,1] are clamped; `clamp_note()` says where.
class ProbabilitySequence {
 public:
  struct Constant {
    double c;
  };
  /// c * k^-s
  struct PowerLaw {
    double c;
    double s;
  };
  /// c / (k * ln(k+1)^s)
  struct LogPower {
    double c;
    double s;
  };
  /// values[0..] for k = 1..size, then `tail` forever.
  struct ExplicitList {
    std::vector<double> values;
    double tail;
  };
  using Family = std::variant<Constant, PowerLaw, LogPower, ExplicitList>;

  /// Throws SpecError (field relative to `path`) on non-finite parameters or
  /// explicit values outside [0,1].
  explicit ProbabilitySequence(Family family, const std::string& path = "");

  static ProbabilitySequence constant(double c) { return ProbabilitySequence(Constant{c}); }
  static ProbabilitySequence power_law(double c, double s) {
    return ProbabilitySequence(PowerLaw{c, s});
  }
  static ProbabilitySequence log_power(double c, double s) {
    return ProbabilitySequence(LogPower{c, s});
  }
  static ProbabilitySequence explicit_list(std::vector<double> values, double tail) {
    return ProbabilitySequence(ExplicitList{std::move(values), tail});
  }

  /// Clamped value at k >= 1.
  double operator()(Index k) const;

  /// lim f(k), always known for these families.
  double limit() const;

  /// Convergence class of sum_k f(k).
  SeriesClass sum_class() const;

  /// Certified upper bound on sum_{k >= from} f(k), when that sum is finite
  /// and has a closed-form majorant.
  std::optional<double> tail_sum_bound(Index from) const;

  /// True once f(k) == 1 exactly for all large k.
  bool eventually_one() const;

  /// True when f is non-increasing in k.
  bool non_increasing() const;

  const Family& family() const { return family_; }

  /// Human-readable formula, including any clamp.
  std::string describe() const;
  /// Empty when the formula never leaves [0,1].
  std::string clamp_note() const;

 private:
  double raw(Index k) const;

  Family family_;
};

}  // namespace borel
