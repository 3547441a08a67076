#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ratmon/automata.hpp"
#include "ratmon/case_study.hpp"
#include "ratmon/error.hpp"
#include "ratmon/experiments.hpp"
#include "ratmon/io.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/rational.hpp"

namespace {

using namespace ratmon;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long v = std::stoll(item, &used);
    if (used != item.size() || v <= 0) throw Error("bad list item '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

std::set<Atom> split_atoms(const std::string& text) {
  std::set<Atom> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

// ------------------------------------------------------------ synthesize

struct SynthArgs {
  std::string formula;
  std::string classes;
  std::string mode;
  std::string out;
  std::string dot;
  bool no_minimize = false;
};

int cmd_synthesize(const SynthArgs& a) {
  Formula f = parse_formula(a.formula);
  std::string mode = a.mode.empty() ? (a.classes.empty() ? "standard" : "imperfect") : a.mode;
  SynthesisOptions opts{!a.no_minimize};
  auto start = Clock::now();
  std::shared_ptr<const MonitorMachine> m;
  if (mode == "standard") {
    if (!a.classes.empty()) throw Error("--classes needs --mode imperfect");
    m = build_standard(f, opts);
  } else if (mode == "imperfect") {
    Partition p = Partition(io::parse_class_groups(a.classes)).extended_with(atoms_of(f));
    m = build_imperfect(f, p, opts);
  } else {
    throw Error("unknown mode '" + mode + "'");
  }
  double ms = ms_since(start);
  if (!a.out.empty()) write_output(a.out, io::machine_to_json(*m));
  if (!a.dot.empty()) write_output(a.dot, to_dot(m->machine, to_string(f)));
  std::cout << "mode " << mode << "\nstates " << m->machine.state_count() << "\npropositions "
            << m->machine.alphabet.size() << "\nsynthesis_ms " << ms << "\n";
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string formula;
  std::string machine;
  std::string trace;
  std::string mode = "standard";
  std::string classes;
  std::string alphabet;
  std::string costs;
  int bound = -1;
  int window = 0;
  std::string metric = "metric2";
  std::uint64_t seed = 0;
  std::string out;
  bool no_timing = false;
  bool no_minimize = false;
};

int cmd_verify(const VerifyArgs& a) {
  if (a.formula.empty() == a.machine.empty()) throw Error("give exactly one of --formula, --machine");
  std::string trace_text = read_file(a.trace);
  io::RunReport report;
  report.mode = a.mode;
  report.with_timing = !a.no_timing;
  SynthesisOptions opts{!a.no_minimize};

  std::shared_ptr<const MonitorMachine> m;
  Partition groups(io::parse_class_groups(a.classes));
  auto synth_start = Clock::now();
  if (!a.machine.empty()) {
    m = io::machine_from_json(read_file(a.machine));
    if (!a.classes.empty() && !(m->classes == groups)) {
      throw Error("--classes disagrees with the machine file");
    }
  }
  Formula f = m ? m->formula : parse_formula(a.formula);
  report.formula = to_string(f);

  auto finish = [&](const std::vector<Verdict>& verdicts, const std::vector<std::string>& events,
                    Verdict final, double verify_ms) {
    for (std::size_t i = 0; i < verdicts.size(); ++i) report.steps.push_back({i, events[i], verdicts[i]});
    report.final = final;
    report.verify_ms = verify_ms;
    report.per_event_ns = verdicts.empty() ? 0 : verify_ms * 1e6 / static_cast<double>(verdicts.size());
    write_output(a.out, io::report_to_json(report));
    return 0;
  };

  if (a.mode == "standard") {
    if (!m) m = build_standard(f, opts);
    if (m->mode != MonitorMode::Standard) throw Error("machine is not a standard monitor");
    report.synthesis_ms = ms_since(synth_start);
    std::istringstream in(trace_text);
    PlainTrace t = io::parse_plain_trace(in);
    auto start = Clock::now();
    Monitor mon(m);
    std::vector<Verdict> vs;
    for (const auto& e : t) vs.push_back(mon.step(e));
    double ms = ms_since(start);
    std::vector<std::string> ev;
    for (const auto& e : t) ev.push_back(to_string(e));
    return finish(vs, ev, mon.verdict(), ms);
  }

  if (a.mode != "imperfect" && a.mode != "active" && a.mode != "reactive") {
    throw Error("unknown mode '" + a.mode + "'");
  }
  Partition classes = m ? m->classes : groups.extended_with(atoms_of(f));
  if (!m) m = build_imperfect(f, classes, opts);
  if (m->mode != MonitorMode::Imperfect) throw Error("machine is not an imperfect-information monitor");
  report.synthesis_ms = ms_since(synth_start);

  bool signed_trace = io::looks_signed(trace_text);
  std::istringstream in(trace_text);
  if (a.mode == "imperfect" && signed_trace) {
    SignedTrace t = io::parse_signed_trace(in);
    auto start = Clock::now();
    Monitor mon(m);
    std::vector<Verdict> vs;
    for (const auto& e : t) vs.push_back(mon.step(e));
    double ms = ms_since(start);
    std::vector<std::string> ev;
    for (const auto& e : t) ev.push_back(to_string(e));
    report.broken_per_window = {{}};
    return finish(vs, ev, mon.verdict(), ms);
  }
  if (signed_trace) throw Error(a.mode + " mode reads plain traces");
  PlainTrace t = io::parse_plain_trace(in);

  std::set<Atom> alphabet = classes.atoms();
  for (const auto& x : split_atoms(a.alphabet)) alphabet.insert(x);
  for (const auto& e : t) alphabet.insert(e.begin(), e.end());
  Partition full = classes.extended_with(alphabet);
  VisibilitySpec vs;
  vs.alphabet = alphabet;
  vs.classes = full;
  vs.relation = io::relation_of([&] {
    std::vector<std::vector<Atom>> g;
    for (const auto& c : full.classes()) g.push_back(c.members);
    return g;
  }());
  vs = VisibilitySpec::make(vs.alphabet, vs.relation, io::parse_costs(a.costs));
  // The machine must read events with the same classes it was built for.
  for (const auto& c : classes.classes()) {
    if (!(vs.classes.class_of(c.witness()).members == c.members)) throw Error("class mismatch");
  }
  std::shared_ptr<const MonitorMachine> run_machine = m;
  if (!(full == m->classes)) {
    auto copy = std::make_shared<MonitorMachine>(*m);
    copy->classes = full;
    run_machine = copy;
  }

  RationalConfig cfg;
  cfg.metric = MetricSpec::builtin(a.metric);
  cfg.seed = a.seed;
  std::vector<Verdict> verdicts;
  SignedTrace visible;
  Verdict final = Verdict::Unknown;
  auto start = Clock::now();
  if (a.mode == "imperfect") {
    ActiveMonitor mon(run_machine, vs, {});
    for (const auto& e : t) verdicts.push_back(mon.step(e));
    final = mon.verdict();
    visible = mon.visible();
    report.broken_per_window = {{}};
  } else {
    if (a.bound < 0) throw Error(a.mode + " mode needs --bound");
    if (a.costs.empty() && !full.non_singleton_ids().empty()) throw Error(a.mode + " mode needs --costs");
    cfg.bound = a.bound;
    if (a.mode == "active") {
      cfg.validate(false);
      ActiveMonitor mon(run_machine, vs, select_breaks(f, vs, cfg.metric, cfg.bound, cfg.seed));
      for (const auto& e : t) verdicts.push_back(mon.step(e));
      final = mon.verdict();
      visible = mon.visible();
      report.broken_per_window = {mon.broken()};
    } else {
      if (a.window < 1) throw Error("reactive mode needs --window >= 1");
      cfg.window = a.window;
      ReactiveMonitor mon(run_machine, vs, cfg);
      for (const auto& e : t) verdicts.push_back(mon.step(e));
      final = mon.verdict();
      visible = mon.visible();
      report.broken_per_window = mon.broken_per_window();
    }
  }
  double ms = ms_since(start);
  std::vector<std::string> ev;
  for (const auto& e : visible) ev.push_back(to_string(e));
  return finish(verdicts, ev, final, ms);
}

// ------------------------------------------------------------- casestudy

int cmd_casestudy(bool json, bool with_oracle) {
  casestudy::Grid g = casestudy::run(with_oracle);
  const auto& props = casestudy::properties();
  std::size_t mismatches = 0;
  for (const auto& c : g.cells) mismatches += c.verdict != c.expected;
  if (json) {
    nlohmann::ordered_json j;
    j["properties"] = nlohmann::ordered_json::array();
    for (const auto& p : props) j["properties"].push_back({{"name", p.name}, {"formula", p.text}});
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : g.cells) {
      nlohmann::ordered_json cell = {{"config", casestudy::config_name(c.config)},
                                     {"property", props[c.property].name},
                                     {"verdict", verdict_name(c.verdict)},
                                     {"expected", verdict_name(c.expected)},
                                     {"match", c.verdict == c.expected}};
      if (c.oracle) cell["oracle"] = verdict_name(*c.oracle);
      j["cells"].push_back(cell);
    }
    j["mismatches"] = mismatches;
    j["elapsed_ms"] = g.elapsed_ms;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  auto pad = [](std::string s, std::size_t w, std::size_t visual) {
    if (visual < w) s += std::string(w - visual, ' ');
    return s;
  };
  auto visual_len = [](std::string_view s) {
    std::size_t n = 0;
    for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
    return n;
  };
  std::cout << pad("config", 11, 6);
  for (const auto& p : props) std::cout << pad(p.name, 11, p.name.size());
  std::cout << "\n";
  for (std::size_t row = 0; row < casestudy::kConfigs.size(); ++row) {
    std::string name = casestudy::config_name(casestudy::kConfigs[row]);
    std::cout << pad(name, 11, name.size());
    for (std::size_t i = 0; i < props.size(); ++i) {
      const auto& c = g.cells[row * props.size() + i];
      std::string s(verdict_symbol(c.verdict));
      if (c.verdict != c.expected) s += "*";
      std::cout << pad(s, 11, visual_len(s));
    }
    std::cout << "\n";
  }
  std::cout << "\n";
  for (const auto& c : g.cells) {
    bool flagged = c.config == casestudy::Config::Active2 && c.property == 0;
    if (c.verdict == c.expected && !flagged) continue;
    std::cout << casestudy::config_name(c.config) << " " << props[c.property].name << ": got "
              << verdict_symbol(c.verdict) << ", table " << verdict_symbol(c.expected);
    if (c.oracle) std::cout << ", oracle " << verdict_symbol(*c.oracle);
    if (flagged) std::cout << " (flagged)";
    std::cout << "\n";
  }
  std::cout << mismatches << " cell(s) differ from the table; " << g.elapsed_ms << " ms\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime monitors for LTL under imperfect information"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synthesize", "Build a monitor and write it as JSON/DOT");
  synth->add_option("-f,--formula", sa.formula, "LTL formula")->required();
  synth->add_option("-c,--classes", sa.classes, "Indistinguishable atoms, e.g. 'c~s; a~b~g'");
  synth->add_option("-m,--mode", sa.mode, "standard | imperfect (default: imperfect iff --classes)");
  synth->add_option("-o,--out", sa.out, "Machine JSON output file");
  synth->add_option("--dot", sa.dot, "DOT output file");
  synth->add_flag("--no-minimize", sa.no_minimize, "Skip DFA minimization");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a monitor over a trace");
  verify->add_option("-f,--formula", va.formula, "LTL formula");
  verify->add_option("--machine", va.machine, "Machine JSON from 'synthesize'");
  verify->add_option("-t,--trace", va.trace, "Trace file ('-' for stdin)")->required();
  verify->add_option("-m,--mode", va.mode, "standard | imperfect | active | reactive")
      ->check(CLI::IsMember({"standard", "imperfect", "active", "reactive"}));
  verify->add_option("-c,--classes", va.classes, "Indistinguishable atoms");
  verify->add_option("--alphabet", va.alphabet, "Extra atoms, comma separated");
  verify->add_option("--costs", va.costs, "Class costs, e.g. cs=2,alphabetagamma=3");
  verify->add_option("--bound", va.bound, "Resource bound");
  verify->add_option("--window", va.window, "Reactive time window");
  verify->add_option("--metric", va.metric, "metric0 | metric1 | metric2 | metric3")
      ->check(CLI::IsMember({"metric0", "metric1", "metric2", "metric3"}));
  verify->add_option("--seed", va.seed, "Tie-break seed");
  verify->add_option("-o,--out", va.out, "Report file (default stdout)");
  verify->add_flag("--no-timing", va.no_timing, "Omit timings so reports are reproducible");
  verify->add_flag("--no-minimize", va.no_minimize, "Skip DFA minimization");

  bool cs_json = false;
  bool cs_oracle = false;
  auto* cs = app.add_subcommand("casestudy", "Reproduce the rover verdict grid");
  cs->add_flag("--json", cs_json, "Machine-readable grid");
  cs->add_flag("--oracle", cs_oracle, "Arbitrate differing cells with the brute-force oracle");

  std::string b_synth;
  std::string b_verify;
  std::uint64_t b_seed = 1;
  int b_reps = 5;
  int b_per_size = 10;
  std::string b_out;
  auto* bench = app.add_subcommand("bench", "Synthesis/verification timing CSV");
  auto* o_synth = bench->add_option("--synth", b_synth, "Formula sizes, e.g. 1,2,3");
  auto* o_verify = bench->add_option("--verify", b_verify, "Trace lengths, e.g. 100,1000");
  o_synth->excludes(o_verify);
  bench->add_option("--seed", b_seed, "Seed");
  bench->add_option("--reps", b_reps, "Repetitions (>= 5 recommended)")->check(CLI::PositiveNumber);
  bench->add_option("--formulas-per-size", b_per_size, "Formulas per size")->check(CLI::PositiveNumber);
  bench->add_option("-o,--out", b_out, "CSV output file");

  experiments::MetricsConfig mc;
  std::string m_metrics = "metric0,metric1,metric2,metric3";
  std::string m_out;
  auto* metrics = app.add_subcommand("metrics", "Compare metrics over a seeded corpus");
  metrics->add_option("--formulas", mc.formulas, "Number of formulas")->check(CLI::PositiveNumber);
  metrics->add_option("--traces", mc.traces, "Traces per formula")->check(CLI::PositiveNumber);
  metrics->add_option("--seed", mc.seed, "Seed");
  metrics->add_option("--metrics", m_metrics, "Comma-separated metric ids");
  metrics->add_option("--threads", mc.threads, "Worker threads (0: all cores)");
  metrics->add_option("-o,--out", m_out, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synthesize(sa);
    if (verify->parsed()) return cmd_verify(va);
    if (cs->parsed()) return cmd_casestudy(cs_json, cs_oracle);
    if (bench->parsed()) {
      if (b_synth.empty() && b_verify.empty() && o_synth->count() == 0 && o_verify->count() == 0) {
        throw Error("give --synth or --verify");
      }
      std::vector<experiments::TimingRow> rows;
      if (o_synth->count() > 0) {
        rows = experiments::bench_synthesis(parse_list<int>(b_synth), b_seed, b_reps, b_per_size);
      } else {
        rows = experiments::bench_verify(parse_list<std::size_t>(b_verify), b_seed, b_reps);
      }
      write_output(b_out, experiments::timing_csv(rows));
      return 0;
    }
    if (metrics->parsed()) {
      mc.metrics.clear();
      std::stringstream ss(m_metrics);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) mc.metrics.push_back(item);
      }
      write_output(m_out, experiments::metrics_csv(experiments::run_metrics(mc)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
