#include "cockedhat/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cockedhat/arrangement.hpp"
#include "cockedhat/errors.hpp"
#include "cockedhat/estimators.hpp"
#include "cockedhat/scenario_io.hpp"
#include "cockedhat/scenarios.hpp"

namespace cockedhat::cli {

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"command", c.command},         {"scenario_file", c.scenario_file},
                     {"points", c.points},           {"target", c.target},
                     {"generate_n", c.generate_n},   {"hull_case", c.hull_case},
                     {"model", c.model},             {"formulation", c.formulation},
                     {"event", c.event},             {"trials", c.trials},
                     {"seed", c.seed},               {"output", c.output},
                     {"cap", c.cap},                 {"threads", c.threads},
                     {"counterexample", c.counterexample}, {"lines", c.lines},
                     {"lines_file", c.lines_file}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  ExperimentConfig d;
  c.command = j.at("command").get<std::string>();
  c.scenario_file = j.value("scenario_file", d.scenario_file);
  c.points = j.value("points", d.points);
  c.target = j.value("target", d.target);
  c.generate_n = j.value("generate_n", d.generate_n);
  c.hull_case = j.value("hull_case", d.hull_case);
  c.model = j.value("model", d.model);
  c.formulation = j.value("formulation", d.formulation);
  c.event = j.value("event", d.event);
  c.trials = j.value("trials", d.trials);
  c.seed = j.value("seed", d.seed);
  c.output = j.value("output", d.output);
  c.cap = j.value("cap", d.cap);
  c.threads = j.value("threads", d.threads);
  c.counterexample = j.value("counterexample", d.counterexample);
  c.lines = j.value("lines", d.lines);
  c.lines_file = j.value("lines_file", d.lines_file);
}

namespace {

// Sub-streams of the master seed reserved for scenario and model generation.
constexpr std::uint64_t kScenarioStream = 0xC0CCED0001ULL;
constexpr std::uint64_t kModelStream = 0xC0CCED0002ULL;

std::string dec(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_dec(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// CSV sink: the file named by `output`, stdout for "-", nothing when empty.
class CsvSink {
 public:
  CsvSink(const std::string& path, std::ostream& out) {
    if (path == "-") {
      stream_ = &out;
    } else if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot write " + path);
      stream_ = &file_;
    }
  }

  void row(const std::vector<std::string>& cells) {
    if (!stream_) return;
    for (std::size_t i = 0; i < cells.size(); ++i) *stream_ << (i ? "," : "") << cells[i];
    *stream_ << '\n';
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

struct Setup {
  Scenario scenario;
  ErrorModel model;
  bool generated = false;
};

Scenario load_scenario(const ExperimentConfig& c, std::optional<ErrorModel>* generated_model) {
  const int sources = !c.scenario_file.empty() + !c.points.empty() + (c.generate_n > 0);
  if (sources != 1) throw UsageError("give exactly one scenario source: --scenario, --points/--target, or --n");
  if (!c.scenario_file.empty()) return read_scenario_file(c.scenario_file);
  if (!c.points.empty()) {
    if (c.target.empty()) throw ParseError("<command line>", 0, "target", "--points needs --target");
    const auto f = parse_point_list(c.target, "target");
    if (f.size() != 1) throw ParseError("<command line>", 0, "target", "expected a single point");
    return Scenario{parse_point_list(c.points, "points"), f[0]};
  }
  if (c.hull_case < 0 || c.hull_case > 3) throw UsageError("--case must be 1, 2 or 3");
  std::optional<CaseTag> target;
  if (c.hull_case > 0) target = static_cast<CaseTag>(c.hull_case);
  RandomStream rng = RandomStream::substream(c.seed, kScenarioStream);
  auto [s, m] = random_valid_scenario(c.generate_n, rng, target);
  if (generated_model) *generated_model = std::move(m);
  return s;
}

Setup prepare(const ExperimentConfig& c, bool want_two_ray) {
  std::optional<ErrorModel> interval;
  Setup st;
  st.scenario = load_scenario(c, &interval);
  st.generated = interval.has_value();
  if (c.model != "auto") {
    st.model = parse_model_spec(c.model, st.scenario.size());
    return st;
  }
  if (!interval) {
    std::vector<Angle> widths = max_valid_half_width(st.scenario);
    for (Angle& w : widths) w = Angle(kGeneratorSafetyFactor * w.radians());
    interval = ErrorModel::intervals(widths);
  }
  if (want_two_ray) {
    RandomStream rng = RandomStream::substream(c.seed, kModelStream);
    st.model = random_valid_two_ray_model(st.scenario, *interval, rng);
  } else {
    st.model = *interval;
  }
  return st;
}

bool delta_event(const ExperimentConfig& c, const Scenario& s) {
  if (c.event.empty()) return s.size() == 3;
  if (c.event == "delta") return true;
  if (c.event == "unbounded") return false;
  throw UsageError("--event must be 'delta' or 'unbounded'");
}

std::string patterns_text(const std::vector<SelectionPattern>& ps) {
  std::string out;
  for (const auto& p : ps) out += (out.empty() ? "" : " ") + p.to_string();
  return out;
}

int cmd_simulate(const ExperimentConfig& c, std::ostream& out) {
  const Setup st = prepare(c, false);
  const McOptions opt{c.trials, c.seed, c.threads};
  const bool delta = delta_event(c, st.scenario);
  const Formulation f = parse_formulation(c.formulation);
  const EstimateResult r =
      delta ? mc_estimate_delta(st.scenario, st.model, f, opt) : mc_estimate_unbounded(st.scenario, st.model, opt);
  const std::string hash = hex64(scenario_hash(st.scenario));
  const std::size_t n = st.scenario.size();

  out << "scenario hash: " << hash << "\n";
  out << "model: " << format_model_spec(st.model) << "\n";
  out << (delta ? "Prob(F in hat)" : "Prob(F in unbounded component)") << " ~ " << short_dec(r.p_hat) << "  (95% CI ["
      << short_dec(r.ci_low) << ", " << short_dec(r.ci_high) << "], " << r.successes << " of "
      << (r.conditioning_count ? *r.conditioning_count : r.trials) << ")\n";
  if (r.conditioning_count) out << "hat formed in " << *r.conditioning_count << " of " << r.trials << " trials\n";
  if (!delta) {
    const std::uint64_t den = std::uint64_t{1} << std::min<std::size_t>(n, 63);
    out << "two-ray value 2n/2^n = " << 2 * n << "/" << den << " = " << short_dec(2.0 * n / den) << " (exact for two-ray laws; for other laws this estimate is the only evidence)\n";
  }

  CsvSink csv(c.output, out);
  csv.row({"command", "event", "formulation", "n", "trials", "successes", "conditioning", "p_hat", "ci_low", "ci_high",
           "seed", "scenario_hash"});
  csv.row({"simulate", delta ? "delta" : "unbounded", delta ? std::string(to_string(f)) : "constrained",
           std::to_string(n), std::to_string(r.trials), std::to_string(r.successes),
           r.conditioning_count ? std::to_string(*r.conditioning_count) : "", dec(r.p_hat), dec(r.ci_low),
           dec(r.ci_high), std::to_string(r.seed), hash});
  return kExitOk;
}

int cmd_exact(const ExperimentConfig& c, std::ostream& out) {
  const Setup st = prepare(c, true);
  const bool delta = delta_event(c, st.scenario);
  const Formulation f = parse_formulation(c.formulation);
  const ExactResult r = delta ? exact_two_ray_delta(st.scenario, st.model, f)
                              : exact_two_ray_unbounded(st.scenario, st.model, c.cap, c.threads);
  const std::string hash = hex64(scenario_hash(st.scenario));

  out << r.fraction() << " = " << short_dec(r.probability()) << "\n";
  out << "favorable: " << patterns_text(r.favorable) << "\n";
  if (delta) out << "hat forms in " << r.forming << " of " << r.patterns << " patterns\n";
  out << "scenario hash: " << hash << "\n";

  CsvSink csv(c.output, out);
  csv.row({"command", "event", "formulation", "n", "numerator", "denominator", "probability", "forming", "favorable",
           "scenario_hash"});
  csv.row({"exact", delta ? "delta" : "unbounded", delta ? std::string(to_string(f)) : "constrained",
           std::to_string(st.scenario.size()), std::to_string(r.numerator), std::to_string(r.denominator),
           dec(r.probability()), delta ? std::to_string(r.forming) : "", patterns_text(r.favorable), hash});
  return kExitOk;
}

int cmd_special(const ExperimentConfig& c, std::ostream& out) {
  const Setup st = prepare(c, true);
  const TangentReduction red = tangent_reduction(st.scenario, st.model);
  const SpecialSelections sp = count_special_selections(red, c.cap);
  const auto mult = endpoint_multiplicity(red, c.cap);
  const std::size_t n = st.scenario.size();
  const bool all_two = std::all_of(mult.begin(), mult.end(), [](const auto& kv) { return kv.second == 2; });

  out << "special selections: " << sp.count << " of " << (std::uint64_t{1} << n) << "\n";
  out << "endpoint multiplicities: " << (all_two ? "all 2" : "NOT all 2") << "\n";
  out << "scenario hash: " << hex64(scenario_hash(st.scenario)) << "\n";

  CsvSink csv(c.output, out);
  csv.row({"pattern", "endpoint_start", "endpoint_end", "arc_start", "arc_length"});
  for (const auto& w : sp.witnesses)
    csv.row({w.pattern.to_string(), w.endpoints.first.to_string(), w.endpoints.second.to_string(),
             dec(w.shortest_arc.start.radians()), dec(w.shortest_arc.length)});
  return all_two && sp.count == 2 * n ? kExitOk : kExitValidation;
}

int cmd_counterexample(const ExperimentConfig& c, std::ostream& out) {
  const CounterexampleSpec ce = make_counterexample(parse_counterexample(c.counterexample));
  const std::string props = "properties: " + std::to_string(ce.verified_count()) + "/" +
                            std::to_string(ce.properties.size()) + " verified";
  switch (ce.id) {
    case CounterexampleId::kCE1: {
      const auto conj = exact_two_ray_delta(ce.scenario, ce.model, Formulation::kConjunction);
      const auto cond = exact_two_ray_delta(ce.scenario, ce.model, Formulation::kConditional);
      out << "conjunction " << conj.fraction() << ", conditional " << cond.fraction() << ", " << props << "\n";
      break;
    }
    case CounterexampleId::kCE2: {
      const auto lines = exact_two_ray_delta(ce.scenario, ce.model, Formulation::kLines);
      out << "lines " << lines.fraction() << ", " << props << "\n";
      break;
    }
    case CounterexampleId::kCE3: {
      const auto lines = exact_two_ray_delta(ce.scenario, ce.model, Formulation::kLines);
      const auto conj = exact_two_ray_delta(ce.scenario, ce.model, Formulation::kConjunction);
      out << "lines " << lines.fraction() << ", hats formed " << conj.forming << "/" << conj.patterns << ", " << props
          << "\n";
      break;
    }
  }
  out << "model: " << format_model_spec(ce.model) << "\n" << format_scenario(ce.scenario);
  for (const auto& p : ce.properties)
    out << (p.passed ? "  [ok] " : "  [FAILED] ") << p.name << (p.detail.empty() ? "" : " (" + p.detail + ")") << "\n";

  CsvSink csv(c.output, out);
  csv.row({"id", "property", "passed", "detail"});
  for (const auto& p : ce.properties)
    csv.row({std::string(to_string(ce.id)), "\"" + p.name + "\"", p.passed ? "1" : "0", "\"" + p.detail + "\""});
  return ce.all_verified() ? kExitOk : kExitValidation;
}

int cmd_regions(const ExperimentConfig& c, std::ostream& out) {
  if (c.lines.empty() == c.lines_file.empty()) throw UsageError("give exactly one of --lines or --lines-file");
  const std::vector<Line> lines = c.lines.empty() ? read_lines_file(c.lines_file) : parse_line_list(c.lines, "lines");
  const std::size_t regions = count_regions(lines);
  const std::size_t n = lines.size();
  out << "regions: " << regions << "  (generic bound (n^2+n+2)/2 = " << (n * n + n + 2) / 2 << ")\n";
  CsvSink csv(c.output, out);
  csv.row({"lines", "regions", "generic_regions"});
  csv.row({std::to_string(n), std::to_string(regions), std::to_string((n * n + n + 2) / 2)});
  return kExitOk;
}

int cmd_gen(const ExperimentConfig& c, std::ostream& out) {
  if (c.generate_n == 0) throw UsageError("gen needs --n");
  if (c.output.empty() || c.output == "-") {
    const Setup st = prepare(c, false);
    out << format_scenario(st.scenario);
    return kExitOk;
  }
  const Setup st = prepare(c, false);
  write_scenario_file(c.output, st.scenario);
  out << "wrote " << c.output << " (" << st.scenario.size() << " observation points)\n";
  out << "model: " << format_model_spec(st.model) << "\n";
  out << "scenario hash: " << hex64(scenario_hash(st.scenario)) << "\n";
  return kExitOk;
}

int cmd_table(const ExperimentConfig& c, std::ostream& out) {
  const Setup st = prepare(c, true);
  const auto rows = sign_pattern_table(st.scenario, st.model);
  const HullCase hc = classify_T(st.scenario);
  out << "case " << static_cast<int>(hc.tag);
  if (hc.index) out << " (special site P" << *hc.index + 1 << ")";
  out << "\n";
  CsvSink csv(c.output, out);
  csv.row({"pattern", "hat_forms", "f_in_hat"});
  std::size_t favorable = 0;
  for (const auto& r : rows) {
    out << "  " << r.pattern.to_string() << "  hat " << (r.hat_forms ? "yes" : "no ") << "  F inside "
        << (r.target_inside ? "yes" : "no") << "\n";
    csv.row({r.pattern.to_string(), r.hat_forms ? "1" : "0", r.target_inside ? "1" : "0"});
    favorable += r.target_inside;
  }
  out << "favorable: " << favorable << "/8\n";
  return kExitOk;
}

}  // namespace

int execute(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "simulate") return cmd_simulate(c, out);
    if (c.command == "exact") return cmd_exact(c, out);
    if (c.command == "special") return cmd_special(c, out);
    if (c.command == "counterexample") return cmd_counterexample(c, out);
    if (c.command == "regions") return cmd_regions(c, out);
    if (c.command == "gen") return cmd_gen(c, out);
    if (c.command == "table") return cmd_table(c, out);
    err << "error: unknown command '" << c.command << "'\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DegenerateError& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

namespace {

void add_scenario_options(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--scenario", c.scenario_file, "Scenario file (.scn)");
  sub->add_option("--points", c.points, "Inline observation points 'x,y;x,y;...'");
  sub->add_option("--target", c.target, "Inline target 'x,y'");
  sub->add_option("--n", c.generate_n, "Generate a random valid scenario with n sites");
  sub->add_option("--case", c.hull_case, "Hull case for generated n = 3 scenarios (1, 2, 3)");
  sub->add_option("--model", c.model, "Error model spec, or 'auto'");
  sub->add_option("--seed", c.seed, "Master seed");
  sub->add_option("--output", c.output, "CSV report path ('-' for stdout)");
  sub->add_option("--threads", c.threads, "Worker count (results do not depend on it)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  std::string config_file, save_config;

  CLI::App app{"Cocked-hat probability laboratory"};
  app.name("cockedhat");
  app.require_subcommand(0, 1);
  app.add_option("--config", config_file, "Run the JSON experiment config in this file");
  app.add_option("--save-config", save_config, "Write the effective JSON config to this file");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of Prob(F in hat) or Prob(F in U)");
  add_scenario_options(simulate, c);
  simulate->add_option("--formulation", c.formulation, "conjunction|conditional|lines|constrained");
  simulate->add_option("--event", c.event, "delta|unbounded");
  simulate->add_option("--trials", c.trials, "Number of trials");

  auto* exact = app.add_subcommand("exact", "Exact enumeration for two-ray models");
  add_scenario_options(exact, c);
  exact->add_option("--formulation", c.formulation, "conjunction|conditional|lines|constrained");
  exact->add_option("--event", c.event, "delta|unbounded");
  exact->add_option("--cap", c.cap, "Largest n to enumerate");

  auto* special = app.add_subcommand("special", "Tangent reduction and special selections");
  add_scenario_options(special, c);
  special->add_option("--cap", c.cap, "Largest n to enumerate");

  auto* counter = app.add_subcommand("counterexample", "Build and verify CE1, CE2 or CE3");
  counter->add_option("id", c.counterexample, "CE1|CE2|CE3")->required();
  counter->add_option("--output", c.output, "CSV report path ('-' for stdout)");

  auto* regions = app.add_subcommand("regions", "Count the faces of a line arrangement");
  regions->add_option("--lines", c.lines, "Inline lines 'x,y,angle;...'");
  regions->add_option("--lines-file", c.lines_file, "File of 'L <x> <y> <angle>' records");
  regions->add_option("--output", c.output, "CSV report path ('-' for stdout)");

  auto* gen = app.add_subcommand("gen", "Generate a random valid scenario");
  gen->add_option("--n", c.generate_n, "Number of observation points")->required();
  gen->add_option("--case", c.hull_case, "Hull case for n = 3 (1, 2, 3)");
  gen->add_option("--seed", c.seed, "Master seed");
  gen->add_option("--output", c.output, "Scenario file to write");

  auto* table = app.add_subcommand("table", "Sign-pattern table of a three-site two-ray model");
  add_scenario_options(table, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) {
      err << "usage error: cannot open " << config_file << "\n";
      return kExitUsage;
    }
    try {
      c = nlohmann::json::parse(in).get<ExperimentConfig>();
    } catch (const nlohmann::json::exception& e) {
      err << "usage error: " << config_file << ": " << e.what() << "\n";
      return kExitUsage;
    }
  } else {
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
      err << app.help();
      return kExitUsage;
    }
    c.command = subs.front()->get_name();
  }

  if (!save_config.empty()) {
    std::ofstream cfg(save_config, std::ios::binary | std::ios::trunc);
    cfg << nlohmann::json(c).dump(2) << "\n";
  }
  return execute(c, out, err);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace cockedhat::cli
