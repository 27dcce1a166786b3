#include "fclock/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fclock/analysis.hpp"
#include "fclock/chronology.hpp"
#include "fclock/engine.hpp"
#include "fclock/error.hpp"
#include "fclock/format.hpp"
#include "fclock/scenario.hpp"

namespace fclock::cli {
namespace {

namespace fs = std::filesystem;

struct RunOutputs {
  std::uint64_t seed;
  std::string events;
  std::string timeline;
  std::string arrows;
  std::string summary;
  std::size_t event_count;
  Termination termination;
  std::size_t violations;
};

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument(fmt::format("--scenario: cannot open '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_scenario(text.str());
  } catch (const ParseError& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

RunOutputs simulate(const Scenario& s, const RunConfig& cfg) {
  const EventLog log = run(s.network, cfg, s.excitations);
  const auto audit = audit_causality(log, s.network);
  const auto labels = label_detections(log, s.clock);
  const auto timeline = build_timeline(labels);

  RunOutputs r{cfg.seed, {}, {}, {}, {}, log.size(), log.termination(), audit.violations.size()};
  std::ostringstream events, tl, arrows, summary;
  write_event_log(events, log);
  write_timeline(tl, timeline);
  if (audit.ok()) write_arrow_map(arrows, build_arrow_map(log, timeline));
  write_summary(summary, s.network, log, audit);
  r.events = events.str();
  r.timeline = tl.str();
  r.arrows = arrows.str();
  r.summary = summary.str();
  return r;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw InvalidArgument(fmt::format("--out: cannot write '{}'", path.string()));
}

void write_outputs(const fs::path& dir, const RunOutputs& r) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument(fmt::format("--out: cannot create '{}': {}", dir.string(), ec.message()));
  write_file(dir / "events.tsv", r.events);
  write_file(dir / "timeline.tsv", r.timeline);
  write_file(dir / "arrows.tsv", r.arrows);
  write_file(dir / "summary.txt", r.summary);
}

struct RunFlags {
  std::string scenario;
  std::string out_dir;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_events;
  std::optional<double> until;
  std::optional<std::string> units;
  std::size_t replicas = 1;
};

int cmd_run(const RunFlags& flags, std::ostream& out) {
  Scenario s = load_scenario(flags.scenario);
  // Flags take precedence over the scenario's run/units directives.
  if (flags.units) s.network = s.network.with_units(UnitSystem::of(parse_unit_mode(*flags.units)));
  RunConfig cfg = s.run;
  if (flags.mode) cfg.mode = parse_run_mode(*flags.mode);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.max_events) cfg.max_events = *flags.max_events;
  if (flags.until) cfg.until = *flags.until;
  try {
    cfg.validate();
  } catch (const InvalidParameter& e) {
    throw InvalidArgument(fmt::format("--max-events/--until: {}", e.what()));
  }

  const fs::path dir(flags.out_dir);
  if (flags.replicas <= 1) {
    const auto r = simulate(s, cfg);
    write_outputs(dir, r);
    out << fmt::format("{} events ({}), {} causality violations, written to {}\n", r.event_count,
                       to_string(r.termination), r.violations, dir.string());
    return r.violations == 0 ? kExitOk : kExitValidation;
  }

  std::vector<RunOutputs> results(flags.replicas);
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(flags.replicas, std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < results.size(); i = next++) {
          RunConfig replica = cfg;
          replica.seed = cfg.seed + i;
          results[i] = simulate(s, replica);
        }
      });
    }
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });

  std::ostringstream table;
  table << "seed\tevents\ttermination\tviolations\n";
  std::size_t violations = 0;
  for (const auto& r : results) {
    write_outputs(dir / fmt::format("seed-{}", r.seed), r);
    table << r.seed << '\t' << r.event_count << '\t' << to_string(r.termination) << '\t' << r.violations << '\n';
    violations += r.violations;
  }
  write_file(dir / "replicas.tsv", table.str());
  out << fmt::format("{} replicas, {} causality violations, written to {}\n", results.size(), violations,
                     dir.string());
  return violations == 0 ? kExitOk : kExitValidation;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const Scenario s = load_scenario(path);
  const Network& net = s.network;
  out << fmt::format("{} nodes, {} channels, {} cens, {} sen paths, {} excitations\n", net.nodes().size(),
                     net.channels().size(), net.cens().size(), net.sen_paths().size(), s.excitations.size());
  const auto cycles = detect_cycles(net);
  out << cycles.size() << " cycles\n";
  for (const auto& cycle : cycles) {
    std::string line = "cycle";
    for (const auto& id : cycle) line += ' ' + id.str();
    out << line << '\n';
  }
  for (const auto& path : net.sen_paths()) {
    out << "sen " << path.id.str() << " lifetime " << format_real(sen_lifetime(path, net)) << '\n';
  }
  for (const auto& sl : superluminal_report(net)) {
    out << "superluminal " << sl.id.str() << " ratio " << format_real(sl.ratio) << '\n';
  }
  return kExitOk;
}

int cmd_bigbang(std::size_t k, const std::string& units, const std::string& out_path, std::ostream& out) {
  const auto text = serialize_scenario(preset_to_scenario(bigbang_scenario(k, UnitSystem::of(parse_unit_mode(units)))));
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

int cmd_unify(const std::map<InteractionKind, double>& lifetimes, double tau_u, std::ostream& out) {
  for (const auto& [kind, tau] : lifetimes) {
    if (!std::isfinite(tau) || tau <= 0.0) {
      throw InvalidParameter(fmt::format("--{}: lifetime must be positive (got {})", to_string(kind), tau));
    }
  }
  if (!std::isfinite(tau_u) || tau_u <= 0.0) {
    throw InvalidParameter(fmt::format("--tau-u: must be positive (got {})", tau_u));
  }
  const auto result = unify_lifetimes(lifetimes, tau_u);
  out << "tau_u\t" << format_real(result.tau_u) << '\n' << "kind\tlifetime\tscalar\tproduct\n";
  for (const auto& [kind, scalar] : result.scalars) {
    const double tau = lifetimes.at(kind);
    out << to_string(kind) << '\t' << format_real(tau) << '\t' << format_real(scalar) << '\t'
        << format_real(scalar * tau) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feynman clock causal-network simulator", "fclock"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write events, timeline, arrows and summary");
  run_cmd->add_option("--scenario", run_flags.scenario, "Scenario file")->required();
  run_cmd->add_option("--out", run_flags.out_dir, "Output directory")->required();
  run_cmd->add_option("--mode", run_flags.mode, "det|stoch")
      ->check(CLI::IsMember({"det", "stoch", "deterministic", "stochastic"}));
  run_cmd->add_option("--seed", run_flags.seed, "RNG seed");
  run_cmd->add_option("--max-events", run_flags.max_events, "Event cap")->check(CLI::PositiveNumber);
  run_cmd->add_option("--until", run_flags.until, "Time horizon")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--units", run_flags.units, "natural|si")->check(CLI::IsMember({"natural", "si"}));
  run_cmd->add_option("--replicas", run_flags.replicas, "Independent seeds seed..seed+N-1")
      ->check(CLI::PositiveNumber);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a scenario; report cycles");
  validate_cmd->add_option("--scenario", validate_path, "Scenario file")->required();

  std::size_t k = 0;
  std::string bigbang_units = "natural";
  std::string bigbang_out;
  auto* bigbang_cmd = app.add_subcommand("bigbang", "Emit the root-clock preset scenario");
  bigbang_cmd->add_option("--k", k, "Number of child clocks")->required()->check(CLI::PositiveNumber);
  bigbang_cmd->add_option("--units", bigbang_units, "natural|si")->check(CLI::IsMember({"natural", "si"}));
  bigbang_cmd->add_option("--out", bigbang_out, "Write the scenario here instead of stdout");

  std::map<InteractionKind, double> lifetimes;
  double tau_u = 0.0;
  auto* unify_cmd = app.add_subcommand("unify", "Scalars that map each interaction lifetime onto tau_u");
  for (auto kind : kAllInteractionKinds) {
    unify_cmd->add_option_function<double>(fmt::format("--{}", to_string(kind)),
                                           [&lifetimes, kind](double v) { lifetimes[kind] = v; },
                                           fmt::format("{} lifetime", to_string(kind)))
        ->required();
  }
  unify_cmd->add_option("--tau-u", tau_u, "Unified lifetime")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_flags, out);
    if (*validate_cmd) return cmd_validate(validate_path, out);
    if (*bigbang_cmd) return cmd_bigbang(k, bigbang_units, bigbang_out, out);
    if (*unify_cmd) return cmd_unify(lifetimes, tau_u, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace fclock::cli
