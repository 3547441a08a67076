#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ratmon/automata.hpp"
#include "ratmon/formula.hpp"
#include "ratmon/verdict.hpp"
#include "ratmon/visibility.hpp"

namespace ratmon {

enum class MonitorMode { Standard, Imperfect };

struct SynthesisOptions {
  bool minimize = true;
};

// Immutable synthesized monitor: Moore machine plus what is needed to read
// events for it.
struct MonitorMachine {
  MonitorMode mode = MonitorMode::Standard;
  Formula formula;
  Partition classes;  // imperfect mode only
  MooreMachine machine;

  std::size_t valuation_of(const PlainEvent& e) const;
  std::size_t valuation_of(const SignedEvent& e) const;
};

std::shared_ptr<const MonitorMachine> build_standard(const Formula& f,
                                                     SynthesisOptions opts = {});
std::shared_ptr<const MonitorMachine> build_imperfect(const Formula& f, const Partition& classes,
                                                      SynthesisOptions opts = {});

class Monitor {
 public:
  explicit Monitor(std::shared_ptr<const MonitorMachine> machine);

  Verdict verdict() const;
  Verdict step(const PlainEvent& e);
  Verdict step(const SignedEvent& e);
  void reset();

  std::size_t steps() const { return steps_; }
  std::size_t state() const { return state_; }
  MonitorMode mode() const { return machine_->mode; }
  const MonitorMachine& machine() const { return *machine_; }
  const std::shared_ptr<const MonitorMachine>& shared_machine() const { return machine_; }

 private:
  Verdict advance(std::size_t valuation);

  std::shared_ptr<const MonitorMachine> machine_;
  std::size_t state_ = 0;
  std::size_t steps_ = 0;
};

Monitor synthesize_standard(const Formula& f, SynthesisOptions opts = {});
Monitor synthesize_imperfect(const Formula& f, const Partition& classes,
                             SynthesisOptions opts = {});

// Per-step verdicts from a fresh cursor.
std::vector<Verdict> run(const std::shared_ptr<const MonitorMachine>& m, const PlainTrace& t);
std::vector<Verdict> run(const std::shared_ptr<const MonitorMachine>& m, const SignedTrace& t);

}  // namespace ratmon
