#include "borel/app.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "borel/limsup.hpp"
#include "borel/montecarlo.hpp"
#include "borel/oracle.hpp"

namespace borel::app {
namespace {

using nlohmann::json;

json optional_json(const std::optional<Index>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json header(const ModelSpec& spec, const char* command) {
  return json{{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"spec", spec.source}};
}

json to_json(const DecayReport& d) {
  return json{{"verdict", to_string(d.verdict)},
              {"probes", d.probes},
              {"block_max", d.block_max},
              {"justification", d.justification}};
}

json to_json(const LemmaResult& r) {
  const auto& s = r.series;
  json decades = json::array();
  for (Index n = 10; n <= s.size(); n *= 10)
    decades.push_back(json{{"n", n}, {"partial_sum", s.partial_sums[static_cast<std::size_t>(n - 1)]}});
  const auto zero_from = s.structural_zero_from();
  return json{
      {"m", r.m},
      {"series", to_string(s.kind)},
      {"verdict", to_string(s.verdict.kind)},
      {"justification", s.verdict.justification},
      {"conclusion", to_string(r.conclusion)},
      {"strength", to_string(r.strength)},
      {"provenance", s.provenance},
      {"tail",
       {{"from", s.tail.from},
        {"to", s.tail.to},
        {"points", s.tail.points},
        {"zero_terms", s.tail.zero_terms},
        {"slope", s.tail.slope},
        {"residual", s.tail.residual}}},
      {"terms_evaluated", s.size()},
      {"final_partial_sum", s.partial_sums.back()},
      {"decade_partial_sums", decades},
      {"structural_zero_from", optional_json(zero_from ? std::optional<Index>(*zero_from) : std::nullopt)},
  };
}

json to_json(const TailUnionEstimate& e) {
  return json{{"n", e.start},
              {"truncation", e.truncation},
              {"partial", e.partial},
              {"all_complement", e.all_complement},
              {"union_tail_bound", optional_json(e.union_tail_bound)},
              {"remainder_bound", e.remainder_bound},
              {"lower", e.lower()},
              {"upper", e.upper()},
              {"status", to_string(e.status)},
              {"stalled", e.stalled}};
}

json to_json(const FrequencyEstimate& f) {
  return json{{"point", f.point}, {"lower", f.lower}, {"upper", f.upper}, {"samples", f.samples}};
}

std::string num(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

AnalyzeOutcome analyze(const ModelSpec& spec, const AnalyzeOptions& opt) {
  if (opt.terms < 1) throw std::invalid_argument("--terms must be >= 1");
  if (!(opt.tol > 0)) throw std::invalid_argument("--tol must be > 0");
  AnalyzeOutcome out;
  out.sweep = sweep_m(*spec.model, opt.m_max, opt.terms, opt.tol);
  json& r = out.report = header(spec, "analyze");
  r["settings"] = {{"terms", opt.terms}, {"m_max", opt.m_max}, {"tol", opt.tol}};
  r["decay"] = to_json(out.sweep.results.front().decay);
  json lemmas = json::array();
  for (const auto& res : out.sweep.results) lemmas.push_back(to_json(res));
  r["lemmas"] = lemmas;
  r["least_m"] = optional_json(out.sweep.least_m);
  r["least_certified_m"] = optional_json(out.sweep.least_certified_m);
  return out;
}

json limsup(const ModelSpec& spec, const LimsupOptions& opt) {
  const auto est = limsup_estimate(*spec.model, opt.schedule, opt.tol, opt.k_max);
  json r = header(spec, "limsup");
  r["settings"] = {{"schedule", opt.schedule}, {"tol", opt.tol}, {"k_max", opt.k_max}};
  json samples = json::array();
  for (const auto& s : est.samples) {
    json row = to_json(s);
    if (s.stalled) {
      // The certified interval cannot shrink here; compare the exact partial
      // union over a bounded window against simulation instead.
      const Index t = std::min<Index>(s.truncation, kCrossCheckWindow) - 1;
      MonteCarloConfig cfg;
      cfg.count = opt.cross_check_count;
      cfg.seed = opt.seed;
      const double exact = tail_union_at(*spec.model, s.start, t + 1).partial;
      const auto mc = estimate_tail_union(*spec.model, s.start, t, cfg);
      row["cross_check"] = {{"t", t}, {"exact_partial", exact}, {"estimate", to_json(mc)},
                            {"covered", mc.lower <= exact && exact <= mc.upper}};
    }
    samples.push_back(std::move(row));
  }
  r["samples"] = samples;
  r["alpha_interval"] = json::array({0.0, est.alpha_upper});
  r["alpha_upper"] = est.alpha_upper;
  r["alpha_fit"] = optional_json(est.alpha_fit);
  r["fit_diagnostic"] = est.fit_diagnostic;
  r["monotone_consistent"] = est.monotone_consistent;
  r["stalled"] = est.any_stalled;
  return r;
}

CheckOutcome simulate(const ModelSpec& spec, const EventSequenceModel& exact, const SimulateOptions& opt) {
  if (opt.horizon < 1) throw std::invalid_argument("--horizon must be >= 1");
  if (opt.count < 100) throw std::invalid_argument("--count must be >= 100");
  struct Check {
    std::string kind;
    json where;
    double exact;
  };
  std::vector<Check> checks;
  std::vector<PathPredicate> events;
  const Index h = opt.horizon;
  auto add_window = [&](const WindowPattern& w) {
    checks.push_back({"window",
                      {{"n", w.start},
                       {"m", w.prefix_len},
                       {"orientation", w.orientation == Orientation::PrefixComplement ? "prefix" : "suffix"}},
                      window_prob(exact, w)});
    events.push_back(window_predicate(w));
  };
  for (Index m = 0; m <= 3; ++m)
    for (Index n = 1; n + m <= h; ++n) add_window(WindowPattern::occurrence(n, m));
  for (Index n = 1; n + 1 <= h; ++n)
    add_window(WindowPattern::occurrence(n, 1, Orientation::SuffixComplement));
  for (Index n = 1; n <= h; ++n) {
    const Index t = h - n;
    checks.push_back({"union", {{"n", n}, {"t", t}}, tail_union_at(exact, n, t + 1).partial});
    events.push_back(union_predicate(n, t));
  }

  MonteCarloConfig cfg;
  cfg.count = opt.count;
  cfg.seed = opt.seed;
  const auto estimates = estimate_events(*spec.model, h, events, cfg);

  CheckOutcome out;
  json rows = json::array();
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const double p = checks[i].exact;
    const auto& e = estimates[i];
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(opt.count));
    const bool bad = sigma == 0.0 ? e.point != p : std::abs(e.point - p) > kDisagreementSigmas * sigma;
    flagged += bad ? 1 : 0;
    json row = checks[i].where;
    row["kind"] = checks[i].kind;
    row["exact"] = p;
    row["estimate"] = to_json(e);
    row["sigma"] = sigma;
    row["covered"] = e.lower <= p && p <= e.upper;
    row["disagreement"] = bad;
    rows.push_back(row);
  }
  out.failed = flagged > 0;
  out.report = header(spec, "simulate");
  out.report["settings"] = {{"count", opt.count}, {"seed", opt.seed}, {"horizon", h}, {"confidence", cfg.confidence}};
  out.report["checks"] = rows;
  out.report["disagreements"] = flagged;
  return out;
}

CheckOutcome simulate(const ModelSpec& spec, const SimulateOptions& opt) {
  return simulate(spec, *spec.model, opt);
}

CheckOutcome verify(const ModelSpec& spec, const EventSequenceModel& model, Index horizon) {
  const auto space = TruncatedOutcomeSpace::build(*spec.model, horizon);
  json rows = json::array();
  double max_diff = 0.0;
  std::size_t mismatches = 0;
  auto record = [&](json row, double engine, double reference) {
    const double diff = std::abs(engine - reference);
    max_diff = std::max(max_diff, diff);
    const bool bad = !(diff <= kVerifyTolerance);
    mismatches += bad ? 1 : 0;
    row["engine"] = engine;
    row["reference"] = reference;
    row["diff"] = diff;
    row["mismatch"] = bad;
    rows.push_back(std::move(row));
  };

  for (Index n = 1; n <= horizon; ++n) {
    for (Index m = 0; n + m <= horizon; ++m) {
      for (auto o : {Orientation::PrefixComplement, Orientation::SuffixComplement}) {
        if (m == 0 && o == Orientation::SuffixComplement) continue;
        const auto w = WindowPattern::occurrence(n, m, o);
        record({{"check", "window"}, {"window", to_string(w)}}, window_prob(model, w), oracle_window_prob(space, w));
      }
    }
    for (Index m = 1; n + m - 1 <= horizon; ++m) {
      const auto w = WindowPattern::all_complement(n, m);
      record({{"check", "window"}, {"window", to_string(w)}}, window_prob(model, w), oracle_window_prob(space, w));
    }
    for (Index t = 0; n + t <= horizon; ++t)
      record({{"check", "union"}, {"n", n}, {"t", t}}, tail_union_at(model, n, t + 1).partial,
             oracle_union_prob(space, n, t));
    for (Index k = 1; n + k - 1 <= horizon; ++k) {
      const auto est = tail_union_at(model, n, k);
      record({{"check", "partition"}, {"n", n}, {"k", k}}, est.partial + est.all_complement, 1.0);
    }
  }
  CheckOutcome out;
  out.failed = mismatches > 0;
  out.report = header(spec, "verify");
  out.report["settings"] = {{"horizon", horizon}, {"tolerance", kVerifyTolerance}};
  out.report["oracle_atoms"] = space.atoms().size();
  out.report["oracle_mass"] = space.total_mass();
  out.report["rows"] = rows;
  out.report["max_diff"] = max_diff;
  out.report["mismatches"] = mismatches;
  return out;
}

CheckOutcome verify(const ModelSpec& spec, Index horizon) { return verify(spec, *spec.model, horizon); }

std::string render_table(const json& r) {
  std::ostringstream os;
  const auto& spec = r.at("spec");
  os << kToolName << " " << r.at("version").get<std::string>() << "  " << r.at("command").get<std::string>()
     << "  model: " << spec.value("name", std::string("(unnamed)")) << " ["
     << spec.at("family").get<std::string>() << "]\n";
  const auto cmd = r.at("command").get<std::string>();
  if (cmd == "analyze") {
    const auto& d = r.at("decay");
    os << "marginal decay: " << d.at("verdict").get<std::string>() << "\n\n";
    os << pad("m", 4) << pad("series", 26) << pad("verdict", 22) << pad("tail_slope", 24)
       << pad("partial_sum", 24) << pad("conclusion", 14) << "strength\n";
    for (const auto& l : r.at("lemmas")) {
      os << pad(num(l.at("m")), 4) << pad(l.at("series").get<std::string>(), 26)
         << pad(l.at("verdict").get<std::string>(), 22) << pad(num(l.at("tail").at("slope")), 24)
         << pad(num(l.at("final_partial_sum")), 24) << pad(l.at("conclusion").get<std::string>(), 14)
         << l.at("strength").get<std::string>() << "\n";
    }
    os << "\nleast m with P{A_n i.o.} = 0: " << num(r.at("least_m"))
       << "  (certified: " << num(r.at("least_certified_m")) << ")\n";
  } else if (cmd == "limsup") {
    os << pad("n", 10) << pad("K", 10) << pad("lower", 26) << pad("upper", 26) << pad("status", 22) << "stalled\n";
    for (const auto& s : r.at("samples"))
      os << pad(num(s.at("n")), 10) << pad(num(s.at("truncation")), 10) << pad(num(s.at("lower")), 26)
         << pad(num(s.at("upper")), 26) << pad(s.at("status").get<std::string>(), 22)
         << (s.at("stalled").get<bool>() ? "yes" : "no") << "\n";
    os << "\nP{A_n i.o.} <= " << num(r.at("alpha_upper")) << "\n";
    os << "extrapolated: " << num(r.at("alpha_fit")) << "  (" << r.at("fit_diagnostic").get<std::string>() << ")\n";
  } else if (cmd == "simulate") {
    os << pad("check", 8) << pad("where", 34) << pad("exact", 24) << pad("estimate", 24) << "flag\n";
    for (const auto& c : r.at("checks")) {
      json where = c;
      for (const char* k : {"kind", "exact", "estimate", "sigma", "covered", "disagreement"}) where.erase(k);
      os << pad(c.at("kind").get<std::string>(), 8) << pad(where.dump(), 34) << pad(num(c.at("exact")), 24)
         << pad(num(c.at("estimate").at("point")), 24) << (c.at("disagreement").get<bool>() ? "DISAGREE" : "ok")
         << "\n";
    }
    os << "\ndisagreements: " << num(r.at("disagreements")) << "\n";
  } else if (cmd == "verify") {
    std::size_t shown = 0;
    for (const auto& row : r.at("rows")) {
      if (!row.at("mismatch").get<bool>()) continue;
      os << "MISMATCH " << row.dump() << "\n";
      ++shown;
    }
    os << "rows: " << r.at("rows").size() << "  max diff: " << num(r.at("max_diff"))
       << "  mismatches: " << num(r.at("mismatches")) << "\n";
    (void)shown;
  }
  return os.str();
}

std::string render_series_csv(const SeriesReport& series) {
  std::ostringstream os;
  os << "n,term,partial_sum\n";
  for (Index i = 0; i < series.size(); ++i)
    os << (i + 1) << "," << format_number(series.terms[static_cast<std::size_t>(i)]) << ","
       << format_number(series.partial_sums[static_cast<std::size_t>(i)]) << "\n";
  return os.str();
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Numerical Borel-Cantelli analysis of event sequences"};
  cli.set_version_flag("--version", std::string(kVersion));
  cli.require_subcommand(1);

  std::string spec_path, out_path, format = "json";
  Index terms = 0, m_max = 0, horizon = 0, k_max = 0, csv_m = 0;
  double tol = 0;
  std::vector<Index> schedule;
  std::uint64_t count = 0, seed = 0;
  bool timing = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "model specification (JSON)")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--format", format, "json | csv | table")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_flag("--timing", timing, "include wall-clock timing in the report");
  };
  auto* analyze_cmd = cli.add_subcommand("analyze", "window criteria for m = 0..m_max");
  common(analyze_cmd);
  auto* o_terms = analyze_cmd->add_option("--terms", terms, "series terms N");
  auto* o_mmax = analyze_cmd->add_option("--m-max", m_max, "largest window size");
  auto* o_tol_a = analyze_cmd->add_option("--tol", tol, "marginal decay threshold");
  analyze_cmd->add_option("--csv-m", csv_m, "series written by --format csv");

  auto* limsup_cmd = cli.add_subcommand("limsup", "first-occurrence bounds on P{A_n i.o.}");
  common(limsup_cmd);
  auto* o_sched = limsup_cmd->add_option("--schedule", schedule, "start indices n1,n2,...")->delimiter(',');
  auto* o_tol_l = limsup_cmd->add_option("--tol", tol, "target remainder bound");
  auto* o_kmax = limsup_cmd->add_option("--k-max", k_max, "largest truncation");
  auto* o_seed_l = limsup_cmd->add_option("--seed", seed, "seed for stalled-sample cross-checks");

  auto* simulate_cmd = cli.add_subcommand("simulate", "Monte Carlo cross-check of exact values");
  common(simulate_cmd);
  auto* o_count = simulate_cmd->add_option("--count", count, "paths");
  auto* o_seed = simulate_cmd->add_option("--seed", seed, "random seed");
  auto* o_hor_s = simulate_cmd->add_option("--horizon", horizon, "path length");

  auto* verify_cmd = cli.add_subcommand("verify", "exhaustive oracle comparison");
  common(verify_cmd);
  auto* o_hor_v = verify_cmd->add_option("--horizon", horizon, "oracle horizon");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e, out, err);
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    const ModelSpec spec = load_model_spec(spec_path);
    const auto& d = spec.defaults;
    json report;
    std::string csv;
    int code = kOk;

    if (analyze_cmd->parsed()) {
      AnalyzeOptions opt{d.terms, d.m_max, d.tol};
      if (*o_terms) opt.terms = terms;
      if (*o_mmax) opt.m_max = m_max;
      if (*o_tol_a) opt.tol = tol;
      auto res = analyze(spec, opt);
      report = std::move(res.report);
      if (format == "csv") {
        if (csv_m < 0 || csv_m >= static_cast<Index>(res.sweep.results.size()))
          throw std::invalid_argument("--csv-m must lie in [0, m_max]");
        csv = render_series_csv(res.sweep.results[static_cast<std::size_t>(csv_m)].series);
      }
    } else {
      if (format == "csv") throw std::invalid_argument("--format csv applies to analyze only");
      if (limsup_cmd->parsed()) {
        LimsupOptions opt{d.schedule, d.limsup_tol, d.k_max, d.seed};
        if (*o_seed_l) opt.seed = seed;
        if (*o_sched) opt.schedule = schedule;
        if (*o_tol_l) opt.tol = tol;
        if (*o_kmax) opt.k_max = k_max;
        report = limsup(spec, opt);
      } else if (simulate_cmd->parsed()) {
        SimulateOptions opt{d.count, d.seed, d.horizon};
        if (*o_count) opt.count = count;
        if (*o_seed) opt.seed = seed;
        if (*o_hor_s) opt.horizon = horizon;
        auto res = simulate(spec, opt);
        report = std::move(res.report);
        if (res.failed) code = kDisagreement;
      } else {
        auto res = verify(spec, *o_hor_v ? horizon : d.horizon);
        report = std::move(res.report);
        if (res.failed) code = kOracleMismatch;
      }
    }
    if (timing)
      report["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

    const std::string body = format == "csv" ? csv : report.dump(2) + "\n";
    if (format == "table") {
      out << render_table(report);
      if (!out_path.empty()) std::ofstream(out_path) << body;
    } else if (out_path.empty()) {
      out << body;
    } else {
      std::ofstream f(out_path);
      if (!f) throw std::invalid_argument("cannot write " + out_path);
      f << body;
    }
    if (code == kDisagreement) err << "simulate: Monte Carlo disagrees with exact values\n";
    if (code == kOracleMismatch) err << "verify: engine disagrees with oracle\n";
    return code;
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return kSpecError;
  } catch (const NumericFault& e) {
    err << "numeric fault: " << e.what() << "\n";
    return kNumericFault;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kSpecError;
  }
}

}  // namespace borel::app
