#include "ratmon/monitor.hpp"

#include "ratmon/error.hpp"

namespace ratmon {

std::size_t MonitorMachine::valuation_of(const PlainEvent& e) const {
  if (mode != MonitorMode::Standard) throw Error("imperfect monitor expects signed events");
  return machine.alphabet.valuation_of(machine.alphabet.mask_of(e));
}

std::size_t MonitorMachine::valuation_of(const SignedEvent& e) const {
  if (mode != MonitorMode::Imperfect) throw Error("standard monitor expects plain events");
  return machine.alphabet.valuation_of(machine.alphabet.mask_of(known_values(e, classes)));
}

std::shared_ptr<const MonitorMachine> build_standard(const Formula& f, SynthesisOptions opts) {
  for (const auto& p : props_of(f)) {
    if (p.sign != Sign::Plain) throw Error("standard monitor needs a plain formula");
  }
  Formula pos = to_nnf(f);
  Formula neg = to_nnf(Formula::negation(f));
  Alphabet sigma = alphabet_of({pos, neg});
  auto m = std::make_shared<MonitorMachine>();
  m->mode = MonitorMode::Standard;
  m->formula = f;
  m->machine = product2(prefix_dfa(pos, sigma, opts.minimize), prefix_dfa(neg, sigma, opts.minimize));
  return m;
}

std::shared_ptr<const MonitorMachine> build_imperfect(const Formula& f, const Partition& classes,
                                                      SynthesisOptions opts) {
  Formula nnf = to_nnf(f);
  Formula pos = explicit_formula(nnf, classes);
  Formula neg = explicit_formula(to_nnf(Formula::negation(nnf)), classes);
  Formula und = undefined_formula(nnf, classes);
  Alphabet sigma = alphabet_of({pos, neg, und});
  auto m = std::make_shared<MonitorMachine>();
  m->mode = MonitorMode::Imperfect;
  m->formula = f;
  m->classes = classes;
  m->machine = product3(prefix_dfa(pos, sigma, opts.minimize), prefix_dfa(neg, sigma, opts.minimize),
                        prefix_dfa(und, sigma, opts.minimize));
  return m;
}

Monitor::Monitor(std::shared_ptr<const MonitorMachine> machine) : machine_(std::move(machine)) {
  if (!machine_) throw Error("null monitor machine");
  reset();
}

void Monitor::reset() {
  state_ = machine_->machine.initial;
  steps_ = 0;
}

Verdict Monitor::verdict() const { return machine_->machine.output[state_]; }

Verdict Monitor::advance(std::size_t valuation) {
  state_ = machine_->machine.next[state_][valuation];
  ++steps_;
  return verdict();
}

Verdict Monitor::step(const PlainEvent& e) { return advance(machine_->valuation_of(e)); }
Verdict Monitor::step(const SignedEvent& e) { return advance(machine_->valuation_of(e)); }

Monitor synthesize_standard(const Formula& f, SynthesisOptions opts) {
  return Monitor(build_standard(f, opts));
}

Monitor synthesize_imperfect(const Formula& f, const Partition& classes, SynthesisOptions opts) {
  return Monitor(build_imperfect(f, classes, opts));
}

std::vector<Verdict> run(const std::shared_ptr<const MonitorMachine>& m, const PlainTrace& t) {
  Monitor mon(m);
  std::vector<Verdict> out;
  out.reserve(t.size());
  for (const auto& e : t) out.push_back(mon.step(e));
  return out;
}

std::vector<Verdict> run(const std::shared_ptr<const MonitorMachine>& m, const SignedTrace& t) {
  Monitor mon(m);
  std::vector<Verdict> out;
  out.reserve(t.size());
  for (const auto& e : t) out.push_back(mon.step(e));
  return out;
}

}  // namespace ratmon
