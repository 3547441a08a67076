#include "ratmon/rational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ratmon/error.hpp"

namespace ratmon {

namespace {

double combine(Combiner c, double a, double b) {
  switch (c) {
    case Combiner::Average: return (a + b) / 2;
    case Combiner::Max: return std::max(a, b);
    case Combiner::Min: return std::min(a, b);
  }
  return 0;
}

double metric_rec(const Formula& f, const Atom& atom, const MetricSpec& s) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return 0;
    case Op::Atom:
      return f.prop().atom == atom ? 1 : 0;
    case Op::Not:
      return metric_rec(f.lhs(), atom, s);
    case Op::And:
      return combine(s.conj, metric_rec(f.lhs(), atom, s), metric_rec(f.rhs(), atom, s));
    case Op::Or:
      return combine(s.disj, metric_rec(f.lhs(), atom, s), metric_rec(f.rhs(), atom, s));
    case Op::Implies:
      return combine(s.impl, metric_rec(f.lhs(), atom, s), metric_rec(f.rhs(), atom, s));
    case Op::Next:
      return s.next * metric_rec(f.lhs(), atom, s);
    case Op::Until:
      return s.until_left * metric_rec(f.lhs(), atom, s) +
             s.until_right * metric_rec(f.rhs(), atom, s);
    case Op::Release:
      return s.release_left * metric_rec(f.lhs(), atom, s) +
             s.release_right * metric_rec(f.rhs(), atom, s);
    default:
      throw Error("metric: formula is not in metric form");
  }
}

}  // namespace

void MetricSpec::validate() const {
  auto unit = [](double x) { return x >= 0 && x <= 1; };
  if (!unit(next)) throw Error("metric '" + name + "': next factor outside [0,1]");
  if (until_left < 0 || until_right < 0 || until_left + until_right > 1 + 1e-12) {
    throw Error("metric '" + name + "': bad until weights");
  }
  if (release_left < 0 || release_right < 0 || release_left + release_right > 1 + 1e-12) {
    throw Error("metric '" + name + "': bad release weights");
  }
}

MetricSpec MetricSpec::builtin(const std::string& name) {
  MetricSpec s;
  s.name = name;
  if (name == "metric0") {
    s.conj = Combiner::Min;
    s.next = 0.1;
    s.until_left = 0.9;
    s.until_right = 0.1;
    s.release_left = 0.9;
    s.release_right = 0.1;
  } else if (name == "metric1") {
    s.release_left = 0.5;
    s.release_right = 0.5;
  } else if (name == "metric2") {
  } else if (name == "metric3") {
    s.next = 1.0;
  } else {
    throw Error("unknown metric '" + name + "'");
  }
  return s;
}

std::vector<std::string> MetricSpec::builtin_names() {
  return {"metric0", "metric1", "metric2", "metric3"};
}

double metric(const Formula& f, const Atom& atom, const MetricSpec& spec) {
  return metric_rec(to_metric_form(f), atom, spec);
}

std::map<ClassId, double> payoff(const Partition& classes, const Formula& f,
                                 const MetricSpec& spec) {
  Formula mf = to_metric_form(f);
  std::map<ClassId, double> out;
  for (const auto& c : classes.classes()) {
    if (c.singleton()) continue;
    double sum = 0;
    for (const auto& a : c.members) sum += metric_rec(mf, a, spec);
    out[c.id()] = sum;
  }
  return out;
}

std::set<ClassId> knapsack(const std::vector<KnapsackItem>& items, int bound, std::uint64_t seed) {
  if (bound < 0) throw Error("negative bound");
  std::vector<KnapsackItem> pool;
  for (const auto& it : items) {
    if (it.cost < 0) throw Error("negative cost for class '" + it.id + "'");
    if (it.payoff > kPayoffEps && it.cost <= bound) pool.push_back(it);
  }
  std::sort(pool.begin(), pool.end(),
            [](const KnapsackItem& a, const KnapsackItem& b) { return a.id < b.id; });
  // Tie order: index 0 is the most preferred item.
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);

  struct Pick {
    double payoff = 0;
    std::size_t atoms = 0;
    std::vector<bool> chosen;
  };
  auto better = [](const Pick& a, const Pick& b) {
    if (std::abs(a.payoff - b.payoff) > kPayoffEps) return a.payoff > b.payoff;
    if (a.atoms != b.atoms) return a.atoms > b.atoms;
    for (std::size_t i = 0; i < a.chosen.size(); ++i) {
      if (a.chosen[i] != b.chosen[i]) return static_cast<bool>(a.chosen[i]);
    }
    return false;
  };

  std::size_t cap = static_cast<std::size_t>(bound);
  std::vector<Pick> row(cap + 1, Pick{0, 0, std::vector<bool>(pool.size(), false)});
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::vector<Pick> next = row;
    std::size_t cost = static_cast<std::size_t>(pool[i].cost);
    for (std::size_t c = cost; c <= cap; ++c) {
      Pick cand = row[c - cost];
      cand.payoff += pool[i].payoff;
      cand.atoms += pool[i].atoms;
      cand.chosen[i] = true;
      if (better(cand, next[c])) next[c] = std::move(cand);
    }
    // Keep each row monotone in capacity.
    for (std::size_t c = 1; c <= cap; ++c) {
      if (better(next[c - 1], next[c])) next[c] = next[c - 1];
    }
    row = std::move(next);
  }
  std::set<ClassId> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (row[cap].chosen[i]) out.insert(pool[i].id);
  }
  return out;
}

std::set<ClassId> select_breaks(const Formula& f, const VisibilitySpec& spec,
                                const MetricSpec& metric_spec, int bound, std::uint64_t seed) {
  std::vector<KnapsackItem> items;
  for (const auto& [id, pay] : payoff(spec.classes, f, metric_spec)) {
    items.push_back({id, pay, spec.cost(id), spec.classes.find(id)->members.size()});
  }
  return knapsack(items, bound, seed);
}

void RationalConfig::validate(bool reactive) const {
  metric.validate();
  if (bound < 0) throw Error("bound must be non-negative");
  if (reactive && (!window || *window < 1)) throw Error("reactive monitor needs window >= 1");
  if (window && *window < 1) throw Error("window must be positive");
}

// ------------------------------------------------------------------ active

ActiveMonitor::ActiveMonitor(const Formula& f, VisibilitySpec spec, const RationalConfig& cfg,
                             SynthesisOptions opts)
    : ActiveMonitor(build_imperfect(f, spec.classes, opts), spec,
                    (cfg.validate(false), select_breaks(f, spec, cfg.metric, cfg.bound, cfg.seed))) {}

ActiveMonitor::ActiveMonitor(std::shared_ptr<const MonitorMachine> machine, VisibilitySpec spec,
                             std::set<ClassId> broken)
    : spec_(std::move(spec)), broken_(std::move(broken)), monitor_(std::move(machine)) {
  if (monitor_.mode() != MonitorMode::Imperfect) throw Error("rational monitors need an imperfect machine");
}

Verdict ActiveMonitor::step(const PlainEvent& e) {
  SignedEvent v = visible_event(explicit_event(e, spec_.alphabet), spec_.classes, broken_);
  visible_.push_back(v);
  return monitor_.step(v);
}

// ---------------------------------------------------------------- reactive

ReactiveMonitor::ReactiveMonitor(const Formula& f, VisibilitySpec spec, const RationalConfig& cfg,
                                 SynthesisOptions opts)
    : ReactiveMonitor(build_imperfect(f, spec.classes, opts), spec, cfg) {}

ReactiveMonitor::ReactiveMonitor(std::shared_ptr<const MonitorMachine> machine, VisibilitySpec spec,
                                 const RationalConfig& cfg)
    : spec_(std::move(spec)), cfg_(cfg), monitor_(std::move(machine)) {
  cfg_.validate(true);
  if (monitor_.mode() != MonitorMode::Imperfect) throw Error("rational monitors need an imperfect machine");
  residual_ = to_metric_form(monitor_.machine().formula);
  windows_.push_back(select_breaks(residual_, spec_, cfg_.metric, cfg_.bound, cfg_.seed));
}

void ReactiveMonitor::reallocate() {
  for (std::size_t i = frame_start_; i < visible_.size(); ++i) {
    residual_ = progress(residual_, visible_[i], spec_.classes);
  }
  frame_start_ = visible_.size();
  if (residual_.is_const()) {
    windows_.push_back(windows_.back());
  } else {
    windows_.push_back(select_breaks(residual_, spec_, cfg_.metric, cfg_.bound, cfg_.seed));
  }
}

Verdict ReactiveMonitor::step(const PlainEvent& e) {
  auto w = static_cast<std::size_t>(*cfg_.window);
  if (!visible_.empty() && visible_.size() % w == 0) reallocate();
  SignedEvent v = visible_event(explicit_event(e, spec_.alphabet), spec_.classes, windows_.back());
  visible_.push_back(v);
  return monitor_.step(v);
}

// ------------------------------------------------------------------ batch

RationalRun active_monitor(const PlainTrace& trace, const Formula& f, const VisibilitySpec& spec,
                           const RationalConfig& cfg) {
  ActiveMonitor m(f, spec, cfg);
  RationalRun r;
  for (const auto& e : trace) r.steps.push_back(m.step(e));
  r.final = m.verdict();
  r.broken_per_window = {m.broken()};
  r.visible = m.visible();
  return r;
}

RationalRun reactive_monitor(const PlainTrace& trace, const Formula& f, const VisibilitySpec& spec,
                             const RationalConfig& cfg) {
  ReactiveMonitor m(f, spec, cfg);
  RationalRun r;
  for (const auto& e : trace) r.steps.push_back(m.step(e));
  r.final = m.verdict();
  r.broken_per_window = m.broken_per_window();
  r.visible = m.visible();
  return r;
}

RationalRun fixed_break_run(const PlainTrace& trace, const std::shared_ptr<const MonitorMachine>& m,
                            const VisibilitySpec& spec, const std::set<ClassId>& broken) {
  ActiveMonitor mon(m, spec, broken);
  RationalRun r;
  for (const auto& e : trace) r.steps.push_back(mon.step(e));
  r.final = mon.verdict();
  r.broken_per_window = {broken};
  r.visible = mon.visible();
  return r;
}

}  // namespace ratmon
