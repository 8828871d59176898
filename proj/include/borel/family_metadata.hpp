#pragma once

#include <string>
#include <string_view>

#include "borel/model.hpp"

namespace borel {

/// Window sizes for which families emit closed-form classifications.
inline constexpr Index kMetadataMaxWindow = 32;

/// Closed-form argument for the convergence class of sum_k f(k).
std::string sum_argument(const ProbabilitySequence& seq);

/// Marginal limit and marginal-series classification for events with
/// P{A_n} given by `seq` (up to finite repetition of indices).
AnalyticMetadata sequence_marginal_metadata(const ProbabilitySequence& seq, std::string_view what);

}  // namespace borel
