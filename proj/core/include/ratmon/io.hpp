#pragma once

#include <istream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratmon/monitor.hpp"
#include "ratmon/rational.hpp"
#include "ratmon/visibility.hpp"

namespace ratmon::io {

// "c~s; alpha~beta~gamma"
std::vector<std::vector<Atom>> parse_class_groups(std::string_view text);
std::vector<std::pair<Atom, Atom>> relation_of(const std::vector<std::vector<Atom>>& groups);
// "cs=2,alphabetagamma=3"
std::map<ClassId, int> parse_costs(std::string_view text);

PlainTrace parse_plain_trace(std::istream& in);
SignedTrace parse_signed_trace(std::istream& in);
// True if any token looks like `name=v`.
bool looks_signed(const std::string& text);

std::string machine_to_json(const MonitorMachine& m);
std::shared_ptr<const MonitorMachine> machine_from_json(const std::string& text);

struct StepRecord {
  std::size_t index = 0;
  std::string event;
  Verdict verdict = Verdict::Unknown;
};

struct RunReport {
  std::string mode;
  std::string formula;
  std::vector<StepRecord> steps;
  Verdict final = Verdict::Unknown;
  std::vector<std::set<ClassId>> broken_per_window;
  bool with_timing = true;
  double synthesis_ms = 0;
  double verify_ms = 0;
  double per_event_ns = 0;
};

std::string report_to_json(const RunReport& r);

}  // namespace ratmon::io
