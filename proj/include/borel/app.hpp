#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "borel/criteria.hpp"
#include "borel/spec_io.hpp"

namespace borel::app {

inline constexpr const char* kToolName = "borel";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kSpecError = 2,
  kNumericFault = 3,
  kDisagreement = 4,
  kOracleMismatch = 5,
};

/// Monte Carlo disagreement threshold in standard errors of the exact value.
inline constexpr double kDisagreementSigmas = 4.0;
/// Oracle/engine mismatch threshold for verify.
inline constexpr double kVerifyTolerance = 1e-10;

struct AnalyzeOptions {
  Index terms = 1000;
  Index m_max = 3;
  double tol = 1e-3;
};
struct AnalyzeOutcome {
  nlohmann::json report;
  SweepResult sweep;
};
AnalyzeOutcome analyze(const ModelSpec& spec, const AnalyzeOptions& opt);

/// Longest union window simulated for a stalled limsup sample.
inline constexpr Index kCrossCheckWindow = 1024;

struct LimsupOptions {
  std::vector<Index> schedule;
  double tol = 1e-6;
  Index k_max = Index{1} << 16;
  std::uint64_t seed = 1;
  std::uint64_t cross_check_count = 10'000;
};
nlohmann::json limsup(const ModelSpec& spec, const LimsupOptions& opt);

struct SimulateOptions {
  std::uint64_t count = 100'000;
  std::uint64_t seed = 1;
  Index horizon = 10;
};
struct CheckOutcome {
  nlohmann::json report;
  bool failed = false;
};
/// Exact values come from `exact`, samples from the spec's model. Tests pass
/// a deliberately wrong `exact` to exercise the disagreement path.
CheckOutcome simulate(const ModelSpec& spec, const EventSequenceModel& exact, const SimulateOptions& opt);
CheckOutcome simulate(const ModelSpec& spec, const SimulateOptions& opt);

/// Engine values come from `model`, reference values from the oracle built
/// on the spec's model.
CheckOutcome verify(const ModelSpec& spec, const EventSequenceModel& model, Index horizon);
CheckOutcome verify(const ModelSpec& spec, Index horizon);

/// Shortest representation that parses back to the same double.
std::string format_number(double x);

std::string render_table(const nlohmann::json& report);
std::string render_series_csv(const SeriesReport& series);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace borel::app
