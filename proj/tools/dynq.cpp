#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dynq/equilib.hpp"
#include "dynq/forms.hpp"
#include "dynq/metrics.hpp"
#include "dynq/netcore.hpp"
#include "dynq/optflow.hpp"
#include "dynq/presets.hpp"
#include "dynq/reproduce.hpp"
#include "dynq/scenario.hpp"
#include "dynq/seasonal.hpp"

namespace {

using namespace dynq;
using shell::Scenario;

struct OutputSink {
  std::string path;  // empty = stdout
  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) fail(Errc::bad_argument, "cannot write '" + path + "'");
    out << text;
  }
};

std::string rat_cell(const Rat& r) { return to_string(r) + " (" + to_decimal(r) + ")"; }

equilib::TieBreakPolicy parse_tie_break(const std::string& spec, const netcore::Network& net) {
  if (spec == "worst") return equilib::TieBreakPolicy::worst();
  if (spec == "best") return equilib::TieBreakPolicy::best();
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) fail(Errc::bad_argument, "cannot open route-preference file '" + path + "'");
    std::vector<netcore::Route> pref;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto tokens = netcore::tokenize_line(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 1)
        fail(Errc::parse_error,
             path + ":" + std::to_string(lineno) + ": one comma-separated route per line");
      std::vector<std::string> ids;
      std::string cur;
      for (char c : tokens[0]) {
        if (c == ',') {
          ids.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
      ids.push_back(cur);
      pref.push_back(netcore::route_from_ids(net, ids));
    }
    return equilib::TieBreakPolicy::explicit_order(std::move(pref), "file:" + path);
  }
  fail(Errc::bad_argument, "tie-break must be worst, best, or file:<path>");
}

std::string stage_table(const dynsim::Trajectory& traj, bool csv) {
  if (csv) return dynsim::trajectory_csv(traj);
  std::ostringstream out;
  out << "stage  c_t  w_t  l_t  avg_to_date\n";
  long long running = 0;
  for (Stage t = 1; t <= traj.horizon; ++t) {
    const auto& row = traj.totals(t);
    if (!row.complete) break;
    running += row.latency;
    out << t << "  " << row.transit << "  " << row.waiting << "  " << row.latency << "  "
        << rat_cell(Rat(running, t)) << "\n";
  }
  return out.str();
}

int cmd_simulate(const Scenario& sc, const std::string& profile_path,
                 const std::string& tie_break, Stage horizon, bool csv, const OutputSink& sink) {
  auto inflow = sc.inflow_or_capacity();
  dynsim::StrategyProfile profile;
  if (!profile_path.empty()) {
    std::ifstream in(profile_path);
    if (!in) fail(Errc::bad_argument, "cannot open profile '" + profile_path + "'");
    profile = dynsim::parse_profile(in, sc.network, profile_path);
    if (profile.horizon < horizon) horizon = profile.horizon;
  } else {
    auto policy = parse_tie_break(tie_break, sc.network);
    profile = equilib::greedy_ufr(sc.network, inflow, policy, horizon).profile;
  }
  auto traj = dynsim::simulate(sc.network, inflow, profile, horizon);
  sink.write(stage_table(traj, csv));
  return 0;
}

int cmd_equilibrium(const Scenario& sc, const std::string& tie_break, Stage horizon,
                    const std::string& emit_path, const OutputSink& sink) {
  auto inflow = sc.inflow_or_capacity();
  auto policy = parse_tie_break(tie_break, sc.network);
  auto ss = equilib::detect_steady_state(sc.network, inflow, policy, horizon);
  std::ostringstream out;
  out << "policy " << policy.name << "\n";
  out << "onset " << ss.onset << "\n";
  out << "period " << ss.period << "\n";
  out << "cycle_average " << rat_cell(ss.cycle_average) << "\n";
  if (inflow.is_periodic())
    out << "per_period_total " << rat_cell(ss.cycle_average * Rat(inflow.period())) << "\n";
  sink.write(out.str());
  if (!emit_path.empty()) {
    auto res = equilib::greedy_ufr(sc.network, inflow, policy, ss.onset + 2 * ss.period);
    std::ofstream pf(emit_path);
    if (!pf) fail(Errc::bad_argument, "cannot write '" + emit_path + "'");
    pf << dynsim::emit_profile(sc.network, res.profile);
  }
  return 0;
}

int cmd_optimum(const Scenario& sc, long long delta, const std::string& emit_path,
                const OutputSink& sink) {
  if (delta < 0) delta = netcore::min_cut(sc.network).capacity;
  auto flow = optflow::min_cost_flow(sc.network, delta);
  std::ostringstream out;
  for (const auto& [e, f] : flow.edge_flow)
    out << "edge " << sc.network.edges[(size_t)e].id << " flow " << f << "\n";
  for (const auto& [route, amount] : flow.route_flow)
    out << "route " << netcore::route_id(sc.network, route) << " flow " << amount << "\n";
  out << "value " << flow.value << "\n";
  out << "asymptotic_average_total_latency " << rat_cell(Rat(flow.cost)) << "\n";
  sink.write(out.str());
  if (!emit_path.empty()) {
    Stage horizon = sc.horizon_or(50);
    std::ofstream pf(emit_path);
    if (!pf) fail(Errc::bad_argument, "cannot write '" + emit_path + "'");
    pf << dynsim::emit_profile(sc.network, optflow::opt_strategy(sc.network, delta, horizon));
  }
  return 0;
}

metrics::ParadoxProbe parse_probe(const std::string& spec, const netcore::Network& net) {
  // queue:<edge>:<len> or transit:<edge>:<amt>
  auto first = spec.find(':');
  auto second = spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos)
    fail(Errc::bad_argument, "probe must be queue:<edge>:<len> or transit:<edge>:<amt>");
  std::string kind = spec.substr(0, first);
  std::string edge_id = spec.substr(first + 1, second - first - 1);
  long long amount = std::stoll(spec.substr(second + 1));
  metrics::ParadoxProbe probe;
  if (kind == "queue")
    probe.kind = metrics::ParadoxProbe::AddInitialQueue;
  else if (kind == "transit")
    probe.kind = metrics::ParadoxProbe::IncreaseTransit;
  else
    fail(Errc::bad_argument, "probe kind must be 'queue' or 'transit'");
  probe.edge = net.edge_index(edge_id);
  if (probe.edge < 0) fail(Errc::bad_argument, "unknown edge '" + edge_id + "'");
  probe.amount = amount;
  return probe;
}

int cmd_metrics(const Scenario& sc, bool want_poa, bool want_pos, bool want_braess,
                int max_removal, const std::vector<std::string>& probe_specs,
                const std::vector<std::string>& candidate_names, Stage horizon, bool csv,
                const OutputSink& sink) {
  metrics::ReportOptions opts;
  opts.eq.max_horizon = horizon;
  for (const auto& name : candidate_names) {
    auto cand = presets::candidate_by_name(name);
    if (!cand) fail(Errc::bad_argument, "unknown reference profile '" + name + "'");
    opts.eq.candidates.push_back(std::move(*cand));
  }
  if (want_braess) opts.braess_max_removal = max_removal;
  for (const auto& spec : probe_specs) opts.probes.push_back(parse_probe(spec, sc.network));
  auto report = metrics::full_report(sc.network, opts);

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("delta", std::to_string(report.delta));
  rows.emplace_back("opt", rat_cell(report.opt));
  rows.emplace_back("weq", rat_cell(report.weq) + " [" + report.weq_source + "]");
  rows.emplace_back("beq", rat_cell(report.beq) + " [" + report.beq_source + "]");
  if (want_poa || (!want_pos && !want_braess && probe_specs.empty()))
    rows.emplace_back("poa", rat_cell(report.poa));
  if (want_pos || (!want_poa && !want_braess && probe_specs.empty()))
    rows.emplace_back("pos", rat_cell(report.pos));
  if (report.braess_ratio) {
    rows.emplace_back("braess_ratio", rat_cell(*report.braess_ratio));
    std::string ids;
    for (int e : report.witness_removal)
      ids += (ids.empty() ? "" : ",") + sc.network.edges[(size_t)e].id;
    rows.emplace_back("witness_removal", ids.empty() ? "-" : ids);
  }
  for (const auto& p : report.paradoxes) {
    std::string name = (p.probe.kind == metrics::ParadoxProbe::AddInitialQueue ? "queue:" : "transit:") +
                       sc.network.edges[(size_t)p.probe.edge].id + ":" +
                       std::to_string(p.probe.amount);
    rows.emplace_back("probe " + name,
                      rat_cell(p.before) + " -> " + rat_cell(p.after) +
                          (p.paradox ? " PARADOX" : ""));
  }

  std::ostringstream out;
  if (csv) {
    out << "key,value,rational\n";
    out << "delta," << report.delta << "," << report.delta << "\n";
    out << "opt," << to_decimal(report.opt) << "," << to_string(report.opt) << "\n";
    out << "weq," << to_decimal(report.weq) << "," << to_string(report.weq) << "\n";
    out << "beq," << to_decimal(report.beq) << "," << to_string(report.beq) << "\n";
    out << "poa," << to_decimal(report.poa) << "," << to_string(report.poa) << "\n";
    out << "pos," << to_decimal(report.pos) << "," << to_string(report.pos) << "\n";
    if (report.braess_ratio)
      out << "braess_ratio," << to_decimal(*report.braess_ratio) << ","
          << to_string(*report.braess_ratio) << "\n";
  } else {
    for (const auto& [k, v] : rows) out << k << " " << v << "\n";
  }
  sink.write(out.str());
  return 0;
}

int cmd_seasonal(const Scenario& sc, bool want_distance, Stage horizon, const OutputSink& sink) {
  if (!sc.inflow || !sc.inflow->is_periodic())
    fail(Errc::bad_argument, "seasonal analysis needs 'inflow periodic ...' in the scenario");
  auto inflow = *sc.inflow;
  std::ostringstream out;
  long long gamma = seasonal::implied_rate(inflow);
  out << "period " << inflow.period() << "\n";
  out << "implied_rate " << gamma << "\n";

  if (want_distance) {
    auto [d, path] = seasonal::distance_with_path(inflow.values(), gamma);
    out << "distance " << d << "\n";
    for (const auto& step : path) {
      out << "  step";
      for (long long v : step) out << " " << v;
      out << "\n";
    }
  }

  bool parallel = netcore::classify(sc.network).kind == netcore::Topology::Parallel;
  if (parallel && gamma == netcore::min_cut(sc.network).capacity) {
    out << "seasonal_opt " << rat_cell(seasonal::seasonal_parallel_opt(sc.network, inflow)) << "\n";
    out << "seasonal_weq " << rat_cell(seasonal::seasonal_parallel_weq(sc.network, inflow)) << "\n";
  }
  equilib::EqOptions eq;
  eq.max_horizon = horizon;
  auto gap = seasonal::seasonality_gap(sc.network, inflow, eq);
  out << "simulated_periodic_cost " << rat_cell(gap.periodic_cost) << "\n";
  out << "uniform_scaled_cost " << rat_cell(gap.uniform_cost) << "\n";
  out << "gap " << rat_cell(gap.gap) << " (EXPERIMENTAL: reported, not asserted)\n";
  if (!want_distance && gap.distance >= 0) out << "distance " << gap.distance << "\n";
  sink.write(out.str());
  return 0;
}

int cmd_forms(const Scenario& sc, int theorem, long long delta, Stage horizon,
              const OutputSink& sink) {
  std::ostringstream out;
  auto inflow_rate = delta >= 0 ? delta : netcore::min_cut(sc.network).capacity;
  if (theorem == 2) {
    out << "parallel_opt " << rat_cell(forms::parallel_opt(sc.network, inflow_rate)) << "\n";
    out << "parallel_weq " << rat_cell(forms::parallel_weq(sc.network, inflow_rate)) << "\n";
    long long cap = 0;
    for (const auto& e : sc.network.edges) cap += e.capacity;
    if (inflow_rate == cap) {
      auto ts = forms::transient_schedule(sc.network, inflow_rate);
      for (size_t j = 0; j < ts.thresholds.size(); ++j)
        out << "T" << j + 1 << " " << rat_cell(ts.thresholds[j]) << " floor " << ts.floors[j]
            << " alpha " << rat_cell(ts.offsets[j]) << "\n";
    }
  } else if (theorem == 3) {
    out << "chain_opt " << rat_cell(forms::chain_opt(sc.network)) << "\n";
    out << "chain_weq " << rat_cell(forms::chain_weq(sc.network)) << "\n";
  } else {
    fail(Errc::bad_argument, "--theorem must be 2 or 3");
  }
  auto inflow = dynsim::InflowProfile::uniform(inflow_rate);
  auto ss = equilib::detect_steady_state(sc.network, inflow, equilib::TieBreakPolicy::worst(),
                                         horizon);
  out << "simulated_weq " << rat_cell(ss.cycle_average) << "\n";
  out << "simulated_opt " << rat_cell(optflow::opt_value(sc.network, inflow_rate)) << "\n";
  sink.write(out.str());
  return 0;
}

int cmd_generate(const std::string& kind, const std::vector<std::string>& args,
                 const OutputSink& sink) {
  netcore::Network net;
  if (kind == "braess") {
    if (args.size() != 1) fail(Errc::bad_argument, "usage: generate braess <k>");
    net = netcore::gen_braess(std::stoi(args[0]));
  } else if (kind == "pigou") {
    if (args.size() != 2) fail(Errc::bad_argument, "usage: generate pigou <N> <p>");
    net = netcore::gen_pigou(std::stoll(args[0]), std::stoll(args[1]));
  } else if (kind == "example") {
    if (args.size() != 1) fail(Errc::bad_argument, "usage: generate example <name>");
    auto which = netcore::example_by_name(args[0]);
    if (!which) fail(Errc::bad_argument, "unknown example '" + args[0] + "'");
    net = netcore::gen_example(*which);
  } else if (kind == "two-module") {
    net = dynq::presets::two_module_network();
  } else {
    fail(Errc::bad_argument, "generate kinds: braess, pigou, example, two-module");
  }
  sink.write(netcore::emit_network(net));
  return 0;
}

int cmd_reproduce(const std::string& name, const OutputSink& sink) {
  auto reports = shell::run_reproduce(name);
  std::ostringstream out;
  bool all_ok = true;
  for (const auto& report : reports) {
    out << "[" << report.name << "]\n";
    for (const auto& row : report.rows) {
      out << (row.ok ? "  ok   " : "  FAIL ") << row.label << ": expected " << row.expected
          << ", computed " << row.computed << "\n";
      all_ok &= row.ok;
    }
  }
  out << (all_ok ? "all expectations met\n" : "EXPECTATIONS NOT MET\n");
  sink.write(out.str());
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynq: discrete-time dynamic congestion games with deterministic queues"};
  app.require_subcommand(1);

  std::string scenario_path, profile_path, tie_break = "worst", out_path, emit_path, format =
                                                                                         "table";
  Stage horizon = 600;
  long long delta = -1;
  bool want_poa = false, want_pos = false, want_braess = false, want_distance = false;
  int max_removal = 1;
  int theorem = 2;
  std::vector<std::string> probe_specs, candidate_specs, gen_args;
  std::string gen_kind, reproduce_name;

  auto add_common = [&](CLI::App* cmd, bool needs_scenario = true) {
    if (needs_scenario)
      cmd->add_option("--scenario", scenario_path, "scenario file")->required();
    cmd->add_option("--out", out_path, "write output to this file");
    cmd->add_option("--format", format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}));
    cmd->add_option("--horizon", horizon, "stage budget");
  };

  auto* sim = app.add_subcommand("simulate", "run a fixed or greedy strategy profile");
  add_common(sim);
  sim->add_option("--profile", profile_path, "strategy profile file");
  sim->add_option("--tie-break", tie_break, "worst|best|file:<route-pref-file>");

  auto* eq = app.add_subcommand("equilibrium", "steady state of a greedy equilibrium");
  add_common(eq);
  eq->add_option("--tie-break", tie_break, "worst|best|file:<route-pref-file>");
  eq->add_option("--emit-profile", emit_path, "write the constructed profile here");

  auto* opt = app.add_subcommand("optimum", "static min-cost flow and its schedule");
  add_common(opt);
  opt->add_option("--delta", delta, "flow value (default: capacity)");
  opt->add_option("--emit-profile", emit_path, "write the repeated schedule here");

  auto* met = app.add_subcommand("metrics", "efficiency ratios and paradox probes");
  add_common(met);
  met->add_flag("--poa", want_poa, "price of anarchy");
  met->add_flag("--pos", want_pos, "price of stability");
  met->add_flag("--braess-ratio", want_braess, "edge-removal improvement search");
  met->add_option("--max-removal", max_removal, "largest removal subset");
  met->add_option("--probe", probe_specs, "queue:<edge>:<len> or transit:<edge>:<amt>");
  met->add_option("--candidate", candidate_specs,
                  "bundled reference profile to enter into the value search");

  auto* sea = app.add_subcommand("seasonal", "periodic-inflow analysis");
  add_common(sea);
  sea->add_flag("--distance", want_distance, "print the operation distance and one shortest path");

  auto* frm = app.add_subcommand("forms", "closed forms beside simulated values");
  add_common(frm);
  frm->add_option("--theorem", theorem, "2 (parallel) or 3 (chain)");
  frm->add_option("--delta", delta, "inflow rate (default: capacity)");

  auto* gen = app.add_subcommand("generate", "emit a bundled instance");
  gen->add_option("kind", gen_kind, "braess|pigou|example|two-module")->required();
  gen->add_option("args", gen_args, "generator arguments");
  gen->add_option("--out", out_path, "write output to this file");

  auto* rep = app.add_subcommand("reproduce", "re-run a bundled example end to end");
  rep->add_option("name", reproduce_name, "example name or 'all'")->required();
  rep->add_option("--out", out_path, "write output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    OutputSink sink{out_path};
    bool csv = format == "csv";
    if (sim->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      if (auto warn = shell::cross_validate(sc); !warn.empty()) std::cerr << warn << "\n";
      return cmd_simulate(sc, profile_path, tie_break, sc.horizon_or(horizon), csv, sink);
    }
    if (eq->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      if (auto warn = shell::cross_validate(sc); !warn.empty()) std::cerr << warn << "\n";
      return cmd_equilibrium(sc, tie_break, sc.horizon_or(horizon), emit_path, sink);
    }
    if (opt->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      return cmd_optimum(sc, delta, emit_path, sink);
    }
    if (met->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      return cmd_metrics(sc, want_poa, want_pos, want_braess, max_removal, probe_specs,
                         candidate_specs, sc.horizon_or(horizon), csv, sink);
    }
    if (sea->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      return cmd_seasonal(sc, want_distance, sc.horizon_or(horizon), sink);
    }
    if (frm->parsed()) {
      auto sc = shell::parse_scenario_file(scenario_path);
      return cmd_forms(sc, theorem, delta, sc.horizon_or(horizon), sink);
    }
    if (gen->parsed()) return cmd_generate(gen_kind, gen_args, sink);
    if (rep->parsed()) return cmd_reproduce(reproduce_name, sink);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
