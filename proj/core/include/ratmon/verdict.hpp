#pragma once

#include <array>
#include <string>
#include <string_view>

namespace ratmon {

enum class Verdict {
  True,
  False,
  Undefined,
  Unknown,
  UnknownNotFalse,
  UnknownNotTrue,
};

inline constexpr std::array<Verdict, 6> kAllVerdicts = {
    Verdict::True,    Verdict::False,           Verdict::Undefined,
    Verdict::Unknown, Verdict::UnknownNotFalse, Verdict::UnknownNotTrue};

// TRUE, FALSE, UU, UNKNOWN, UNKNOWN_NOT_FALSE, UNKNOWN_NOT_TRUE
std::string_view verdict_name(Verdict v);
// ⊤ ⊥ uu ? ?≁⊥ ?≁⊤
std::string_view verdict_symbol(Verdict v);
Verdict parse_verdict(std::string_view name);

bool is_final(Verdict v);

// Membership of a prefix in the satisfying, violating and undefined prefix
// languages. Two combinations have no verdict and throw.
Verdict classify(bool sat, bool viol, bool undef);
Verdict classify(bool sat, bool viol);

struct VerdictBits {
  bool sat;
  bool viol;
  bool undef;
};
VerdictBits verdict_bits(Verdict v);

// True if a prefix with verdict `from` may be extended to one with verdict
// `to`. Extensions only ever lose continuations.
bool may_evolve(Verdict from, Verdict to);

}  // namespace ratmon
