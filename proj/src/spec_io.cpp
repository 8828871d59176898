#include "borel/spec_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

#include "borel/independent.hpp"
#include "borel/latent.hpp"
#include "borel/markov.hpp"

namespace borel {
namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw SpecError(path.empty() ? "/" : path, "must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.contains(key)) throw SpecError(path + "/" + key, "unknown field");
}

const json& need(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw SpecError(path + "/" + key, "required field missing");
  return obj.at(key);
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SpecError(path, "must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& path, std::int64_t min) {
  if (!v.is_number_integer()) throw SpecError(path, "must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < min) throw SpecError(path, "must be >= " + std::to_string(min));
  return x;
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw SpecError(path, "must be a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SpecError(path, "must be an array");
  return v;
}

ProbabilitySequence parse_sequence(const json& j, const std::string& path) {
  const auto kind = text(need(j, path, "kind"), path + "/kind");
  if (kind == "constant") {
    only_keys(j, path, {"kind", "c"});
    return ProbabilitySequence(ProbabilitySequence::Constant{number(need(j, path, "c"), path + "/c")}, path);
  }
  if (kind == "power_law" || kind == "log_power") {
    only_keys(j, path, {"kind", "c", "s"});
    const double c = number(need(j, path, "c"), path + "/c");
    const double s = number(need(j, path, "s"), path + "/s");
    if (kind == "power_law") return ProbabilitySequence(ProbabilitySequence::PowerLaw{c, s}, path);
    return ProbabilitySequence(ProbabilitySequence::LogPower{c, s}, path);
  }
  if (kind == "explicit") {
    only_keys(j, path, {"kind", "values", "tail"});
    const auto& vals = array(need(j, path, "values"), path + "/values");
    std::vector<double> values;
    for (std::size_t i = 0; i < vals.size(); ++i)
      values.push_back(number(vals[i], path + "/values/" + std::to_string(i)));
    const double tail = number(need(j, path, "tail"), path + "/tail");
    return ProbabilitySequence(ProbabilitySequence::ExplicitList{std::move(values), tail}, path);
  }
  throw SpecError(path + "/kind", "unknown sequence kind '" + kind + "'");
}

EventSchedule::StateSet parse_state_set(const json& j, const std::string& path) {
  EventSchedule::StateSet out;
  const auto& arr = array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(static_cast<int>(integer(arr[i], path + "/" + std::to_string(i), 0)));
  return out;
}

EventSchedule parse_schedule(const json& j, const std::string& path) {
  const auto kind = text(need(j, path, "kind"), path + "/kind");
  if (kind == "constant") {
    only_keys(j, path, {"kind", "states"});
    return EventSchedule::constant(parse_state_set(need(j, path, "states"), path + "/states"));
  }
  auto sets = [&] {
    std::vector<EventSchedule::StateSet> out;
    const auto& arr = array(need(j, path, "sets"), path + "/sets");
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(parse_state_set(arr[i], path + "/sets/" + std::to_string(i)));
    return out;
  };
  if (kind == "periodic") {
    only_keys(j, path, {"kind", "sets"});
    return EventSchedule::periodic(sets());
  }
  if (kind == "explicit") {
    only_keys(j, path, {"kind", "sets", "tail"});
    return EventSchedule::explicit_list(sets(), parse_state_set(need(j, path, "tail"), path + "/tail"));
  }
  throw SpecError(path + "/kind", "unknown event schedule kind '" + kind + "'");
}

Orientation parse_orientation(const json& j, const std::string& path) {
  const auto o = text(j, path);
  if (o == "prefix") return Orientation::PrefixComplement;
  if (o == "suffix") return Orientation::SuffixComplement;
  throw SpecError(path, "must be 'prefix' or 'suffix'");
}

AnalyticMetadata parse_metadata(const json& j, const std::string& path) {
  only_keys(j, path, {"marginal_limit", "series", "description"});
  AnalyticMetadata meta;
  if (j.contains("marginal_limit"))
    meta.marginal_limit = number(j.at("marginal_limit"), path + "/marginal_limit");
  if (j.contains("description")) meta.description = text(j.at("description"), path + "/description");
  if (j.contains("series")) {
    const auto& arr = array(j.at("series"), path + "/series");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto p = path + "/series/" + std::to_string(i);
      only_keys(arr[i], p, {"kind", "m", "orientation", "class"});
      const auto kind = text(need(arr[i], p, "kind"), p + "/kind");
      SeriesKind sk;
      if (kind == "marginals") {
        sk = SeriesKind::marginals();
      } else if (kind == "window") {
        const Index m = integer(need(arr[i], p, "m"), p + "/m", 0);
        const auto o = arr[i].contains("orientation") ? parse_orientation(arr[i].at("orientation"), p + "/orientation")
                                                      : Orientation::PrefixComplement;
        sk = SeriesKind::window(m, o);
      } else {
        throw SpecError(p + "/kind", "must be 'marginals' or 'window'");
      }
      const auto cls = text(need(arr[i], p, "class"), p + "/class");
      if (cls != "convergent" && cls != "divergent") throw SpecError(p + "/class", "must be 'convergent' or 'divergent'");
      meta.series.emplace_back(sk, cls == "convergent" ? SeriesClass::CertifiedConvergent
                                                       : SeriesClass::CertifiedDivergent);
    }
  }
  return meta;
}

RunDefaults parse_defaults(const json& j, const std::string& path) {
  only_keys(j, path, {"terms", "m_max", "tol", "limsup_tol", "seed", "schedule", "k_max", "count", "horizon"});
  RunDefaults d;
  if (j.contains("terms")) d.terms = integer(j.at("terms"), path + "/terms", 1);
  if (j.contains("m_max")) d.m_max = integer(j.at("m_max"), path + "/m_max", 0);
  if (j.contains("tol")) d.tol = number(j.at("tol"), path + "/tol");
  if (j.contains("limsup_tol")) d.limsup_tol = number(j.at("limsup_tol"), path + "/limsup_tol");
  if (j.contains("seed")) d.seed = static_cast<std::uint64_t>(integer(j.at("seed"), path + "/seed", 0));
  if (j.contains("k_max")) d.k_max = integer(j.at("k_max"), path + "/k_max", 1);
  if (j.contains("count")) d.count = static_cast<std::uint64_t>(integer(j.at("count"), path + "/count", 1));
  if (j.contains("horizon")) d.horizon = integer(j.at("horizon"), path + "/horizon", 1);
  if (j.contains("schedule")) {
    const auto& arr = array(j.at("schedule"), path + "/schedule");
    d.schedule.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      d.schedule.push_back(integer(arr[i], path + "/schedule/" + std::to_string(i), 1));
  }
  if (!(d.tol > 0)) throw SpecError(path + "/tol", "must be > 0");
  if (!(d.limsup_tol > 0)) throw SpecError(path + "/limsup_tol", "must be > 0");
  return d;
}

}  // namespace

ModelSpec parse_model_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("/", "spec must be a JSON object");
  ModelSpec spec;
  spec.source = doc;
  spec.family = text(need(doc, "", "family"), "/family");
  if (doc.contains("name")) spec.name = text(doc.at("name"), "/name");
  if (doc.contains("description")) text(doc.at("description"), "/description");

  AnalyticMetadata extra;
  if (doc.contains("metadata")) extra = parse_metadata(doc.at("metadata"), "/metadata");
  if (doc.contains("defaults")) spec.defaults = parse_defaults(doc.at("defaults"), "/defaults");

  if (spec.family == "independent") {
    only_keys(doc, "", {"name", "description", "family", "marginal", "metadata", "defaults"});
    spec.model = std::make_shared<IndependentModel>(parse_sequence(need(doc, "", "marginal"), "/marginal"), extra);
  } else if (spec.family == "markov") {
    only_keys(doc, "", {"name", "description", "family", "transition", "initial", "events", "metadata", "defaults"});
    const auto& rows = array(need(doc, "", "transition"), "/transition");
    const auto s = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd p(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto rp = "/transition/" + std::to_string(i);
      const auto& row = array(rows[static_cast<std::size_t>(i)], rp);
      if (static_cast<Eigen::Index>(row.size()) != s) throw SpecError(rp, "row length must equal the number of states");
      for (Eigen::Index k = 0; k < s; ++k)
        p(i, k) = number(row[static_cast<std::size_t>(k)], rp + "/" + std::to_string(k));
    }
    const auto& init = array(need(doc, "", "initial"), "/initial");
    Eigen::RowVectorXd pi(static_cast<Eigen::Index>(init.size()));
    for (std::size_t i = 0; i < init.size(); ++i) pi(static_cast<Eigen::Index>(i)) = number(init[i], "/initial/" + std::to_string(i));
    spec.model = std::make_shared<MarkovModel>(std::move(p), std::move(pi),
                                               parse_schedule(need(doc, "", "events"), "/events"), extra);
  } else if (spec.family == "latent-uniform") {
    only_keys(doc, "", {"name", "description", "family", "latents", "coloring", "thresholds", "threshold_index",
                        "metadata", "defaults"});
    const auto latents = integer(need(doc, "", "latents"), "/latents", 1);
    std::vector<int> coloring;
    const auto& col = array(need(doc, "", "coloring"), "/coloring");
    for (std::size_t i = 0; i < col.size(); ++i)
      coloring.push_back(static_cast<int>(integer(col[i], "/coloring/" + std::to_string(i), 0)));
    ThresholdIndex idx;
    if (doc.contains("threshold_index")) {
      const auto& ti = doc.at("threshold_index");
      only_keys(ti, "/threshold_index", {"stride", "shift"});
      if (ti.contains("stride")) idx.stride = integer(ti.at("stride"), "/threshold_index/stride", 1);
      if (ti.contains("shift")) idx.shift = integer(ti.at("shift"), "/threshold_index/shift", 0);
    }
    spec.model = std::make_shared<LatentUniformModel>(static_cast<int>(latents), std::move(coloring),
                                                      parse_sequence(need(doc, "", "thresholds"), "/thresholds"),
                                                      idx, extra);
  } else {
    throw SpecError("/family", "must be one of independent, markov, latent-uniform");
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("/", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("/", std::string("invalid JSON: ") + e.what());
  }
  return parse_model_spec(doc);
}

}  // namespace borel
