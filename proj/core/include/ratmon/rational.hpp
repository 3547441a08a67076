#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ratmon/formula.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/visibility.hpp"

namespace ratmon {

enum class Combiner { Average, Max, Min };

struct MetricSpec {
  std::string name = "metric2";
  Combiner disj = Combiner::Average;
  Combiner conj = Combiner::Max;
  Combiner impl = Combiner::Average;
  double next = 0.5;
  double until_left = 0.3;
  double until_right = 0.7;
  double release_left = 0.3;
  double release_right = 0.7;

  void validate() const;
  static MetricSpec builtin(const std::string& name);
  static std::vector<std::string> builtin_names();
};

double metric(const Formula& f, const Atom& atom, const MetricSpec& spec);
std::map<ClassId, double> payoff(const Partition& classes, const Formula& f,
                                 const MetricSpec& spec);

struct KnapsackItem {
  ClassId id;
  double payoff = 0;
  int cost = 0;
  std::size_t atoms = 0;
};

// Payoffs closer than this count as equal.
inline constexpr double kPayoffEps = 1e-9;

// 0/1 knapsack over integer costs. Among optimal selections prefers more
// atoms, then a fixed order derived from `seed`. Items with payoff ≤ eps are
// never taken.
std::set<ClassId> knapsack(const std::vector<KnapsackItem>& items, int bound,
                           std::uint64_t seed = 0);

std::set<ClassId> select_breaks(const Formula& f, const VisibilitySpec& spec,
                                const MetricSpec& metric, int bound, std::uint64_t seed);

struct RationalConfig {
  MetricSpec metric;
  int bound = 0;
  std::optional<int> window;
  std::uint64_t seed = 0;

  void validate(bool reactive) const;
};

struct RationalRun {
  std::vector<Verdict> steps;
  Verdict final = Verdict::Unknown;
  std::vector<std::set<ClassId>> broken_per_window;
  SignedTrace visible;
};

// One allocation, then filtering.
class ActiveMonitor {
 public:
  ActiveMonitor(const Formula& f, VisibilitySpec spec, const RationalConfig& cfg,
                SynthesisOptions opts = {});
  ActiveMonitor(std::shared_ptr<const MonitorMachine> machine, VisibilitySpec spec,
                std::set<ClassId> broken);

  Verdict step(const PlainEvent& e);
  Verdict verdict() const { return monitor_.verdict(); }
  const std::set<ClassId>& broken() const { return broken_; }
  const SignedTrace& visible() const { return visible_; }
  const Monitor& monitor() const { return monitor_; }

 private:
  VisibilitySpec spec_;
  std::set<ClassId> broken_;
  Monitor monitor_;
  SignedTrace visible_;
};

// Reallocation at each window boundary using the residual formula.
class ReactiveMonitor {
 public:
  ReactiveMonitor(const Formula& f, VisibilitySpec spec, const RationalConfig& cfg,
                  SynthesisOptions opts = {});
  ReactiveMonitor(std::shared_ptr<const MonitorMachine> machine, VisibilitySpec spec,
                  const RationalConfig& cfg);

  Verdict step(const PlainEvent& e);
  Verdict verdict() const { return monitor_.verdict(); }
  const std::vector<std::set<ClassId>>& broken_per_window() const { return windows_; }
  const SignedTrace& visible() const { return visible_; }
  const Formula& residual() const { return residual_; }

 private:
  void reallocate();

  VisibilitySpec spec_;
  RationalConfig cfg_;
  Monitor monitor_;
  Formula residual_;
  std::vector<std::set<ClassId>> windows_;
  SignedTrace visible_;
  std::size_t frame_start_ = 0;
};

RationalRun active_monitor(const PlainTrace& trace, const Formula& f, const VisibilitySpec& spec,
                           const RationalConfig& cfg);
RationalRun reactive_monitor(const PlainTrace& trace, const Formula& f,
                             const VisibilitySpec& spec, const RationalConfig& cfg);

// Imperfect monitor with a fixed broken set over a plain trace.
RationalRun fixed_break_run(const PlainTrace& trace, const std::shared_ptr<const MonitorMachine>& m,
                            const VisibilitySpec& spec, const std::set<ClassId>& broken);

}  // namespace ratmon
