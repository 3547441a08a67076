#include "ratmon/verdict.hpp"

#include "ratmon/error.hpp"

namespace ratmon {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "TRUE";
    case Verdict::False: return "FALSE";
    case Verdict::Undefined: return "UU";
    case Verdict::Unknown: return "UNKNOWN";
    case Verdict::UnknownNotFalse: return "UNKNOWN_NOT_FALSE";
    case Verdict::UnknownNotTrue: return "UNKNOWN_NOT_TRUE";
  }
  return "?";
}

std::string_view verdict_symbol(Verdict v) {
  switch (v) {
    case Verdict::True: return "⊤";
    case Verdict::False: return "⊥";
    case Verdict::Undefined: return "uu";
    case Verdict::Unknown: return "?";
    case Verdict::UnknownNotFalse: return "?≁⊥";
    case Verdict::UnknownNotTrue: return "?≁⊤";
  }
  return "?";
}

Verdict parse_verdict(std::string_view name) {
  for (Verdict v : kAllVerdicts) {
    if (verdict_name(v) == name || verdict_symbol(v) == name) return v;
  }
  throw Error("unknown verdict '" + std::string(name) + "'");
}

bool is_final(Verdict v) {
  return v == Verdict::True || v == Verdict::False || v == Verdict::Undefined;
}

Verdict classify(bool sat, bool viol, bool undef) {
  if (sat && !viol && !undef) return Verdict::True;
  if (!sat && viol && !undef) return Verdict::False;
  if (!sat && !viol && undef) return Verdict::Undefined;
  if (sat && !viol && undef) return Verdict::UnknownNotFalse;
  if (!sat && viol && undef) return Verdict::UnknownNotTrue;
  if (sat && viol && undef) return Verdict::Unknown;
  throw Error(std::string("no verdict for membership (") + (sat ? "in" : "out") + "," +
              (viol ? "in" : "out") + "," + (undef ? "in" : "out") + ")");
}

Verdict classify(bool sat, bool viol) {
  if (sat && viol) return Verdict::Unknown;
  if (sat) return Verdict::True;
  if (viol) return Verdict::False;
  throw Error("prefix with neither satisfying nor violating continuation");
}

VerdictBits verdict_bits(Verdict v) {
  switch (v) {
    case Verdict::True: return {true, false, false};
    case Verdict::False: return {false, true, false};
    case Verdict::Undefined: return {false, false, true};
    case Verdict::Unknown: return {true, true, true};
    case Verdict::UnknownNotFalse: return {true, false, true};
    case Verdict::UnknownNotTrue: return {false, true, true};
  }
  return {true, true, true};
}

bool may_evolve(Verdict from, Verdict to) {
  // The three-valued ? has no undefined bit; treat it as unconstrained.
  if (from == Verdict::Unknown) return true;
  VerdictBits a = verdict_bits(from);
  VerdictBits b = verdict_bits(to);
  return (!b.sat || a.sat) && (!b.viol || a.viol) && (!b.undef || a.undef);
}

}  // namespace ratmon
