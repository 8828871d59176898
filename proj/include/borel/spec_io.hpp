#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "borel/model.hpp"

namespace borel {

/// Run parameters a spec file may pin; CLI flags override them.
struct RunDefaults {
  Index terms = 1000;
  Index m_max = 3;
  double tol = 1e-3;         // decay threshold for analyze
  double limsup_tol = 1e-6;  // remainder target for limsup
  std::uint64_t seed = 1;
  std::vector<Index> schedule{10, 100, 1000};
  Index k_max = Index{1} << 16;
  std::uint64_t count = 100'000;
  Index horizon = 10;
};

struct ModelSpec {
  std::string name;
  std::string family;
  nlohmann::json source;
  std::shared_ptr<const EventSequenceModel> model;
  RunDefaults defaults;
};

/// Validates and builds a model spec. Unknown fields are rejected; every
/// SpecError names the offending field as a JSON pointer.
ModelSpec parse_model_spec(const nlohmann::json& doc);

/// Reads the file; syntax errors surface as SpecError at "/".
ModelSpec load_model_spec(const std::filesystem::path& path);

}  // namespace borel
