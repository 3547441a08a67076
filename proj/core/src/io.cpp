#include "ratmon/io.hpp"

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "ratmon/error.hpp"

namespace ratmon::io {

using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(sep, start);
    out.push_back(std::string(s.substr(start, p == std::string_view::npos ? s.npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string sign_name(Sign s) {
  switch (s) {
    case Sign::Plain: return "plain";
    case Sign::KnownTrue: return "known_true";
    case Sign::KnownFalse: return "known_false";
  }
  return "plain";
}

Sign parse_sign(const std::string& s) {
  if (s == "plain") return Sign::Plain;
  if (s == "known_true") return Sign::KnownTrue;
  if (s == "known_false") return Sign::KnownFalse;
  throw Error("unknown proposition sign '" + s + "'");
}

}  // namespace

std::vector<std::vector<Atom>> parse_class_groups(std::string_view text) {
  std::vector<std::vector<Atom>> groups;
  for (const auto& raw : split(text, ';')) {
    std::string g = trim(raw);
    if (g.empty()) continue;
    std::vector<Atom> members;
    for (const auto& a : split(g, '~')) {
      std::string t = trim(a);
      if (!is_identifier(t)) throw Error("malformed classes spec: bad token '" + t + "' in '" + g + "'");
      members.push_back(t);
    }
    groups.push_back(std::move(members));
  }
  return groups;
}

std::vector<std::pair<Atom, Atom>> relation_of(const std::vector<std::vector<Atom>>& groups) {
  std::vector<std::pair<Atom, Atom>> out;
  for (const auto& g : groups) {
    for (std::size_t i = 1; i < g.size(); ++i) out.emplace_back(g[i - 1], g[i]);
  }
  return out;
}

std::map<ClassId, int> parse_costs(std::string_view text) {
  std::map<ClassId, int> out;
  for (const auto& raw : split(text, ',')) {
    std::string item = trim(raw);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("malformed cost '" + item + "'");
    std::string id = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    if (!is_identifier(id) || val.empty() ||
        !std::all_of(val.begin(), val.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw Error("malformed cost '" + item + "'");
    }
    out[id] = std::stoi(val);
  }
  return out;
}

PlainTrace parse_plain_trace(std::istream& in) {
  PlainTrace out;
  for (const auto& line : lines(in)) {
    PlainEvent e;
    for (const auto& t : tokens(line)) {
      if (!is_identifier(t)) throw Error("bad atom '" + t + "' in trace");
      e.insert(t);
    }
    out.push_back(std::move(e));
  }
  return out;
}

SignedTrace parse_signed_trace(std::istream& in) {
  SignedTrace out;
  for (const auto& line : lines(in)) {
    SignedEvent e;
    for (const auto& t : tokens(line)) {
      auto eq = t.rfind('=');
      if (eq == std::string::npos || eq + 2 != t.size() || (t[eq + 1] != '0' && t[eq + 1] != '1')) {
        throw Error("bad literal '" + t + "' in trace");
      }
      std::string name = t.substr(0, eq);
      bool witness = false;
      if (name.size() >= 2 && name.front() == '[' && name.back() == ']') {
        name = name.substr(1, name.size() - 2);
        witness = true;
      }
      if (!is_identifier(name)) throw Error("bad literal '" + t + "' in trace");
      e.insert(Literal{name, t[eq + 1] == '1', witness});
    }
    out.push_back(std::move(e));
  }
  return out;
}

bool looks_signed(const std::string& text) { return text.find('=') != std::string::npos; }

std::string machine_to_json(const MonitorMachine& m) {
  ordered_json j;
  j["format"] = "ratmon-machine";
  j["version"] = 1;
  j["mode"] = m.mode == MonitorMode::Standard ? "standard" : "imperfect";
  j["formula"] = to_string(m.formula);
  ordered_json classes = ordered_json::array();
  for (const auto& c : m.classes.classes()) classes.push_back(c.members);
  j["classes"] = classes;
  ordered_json props = ordered_json::array();
  for (const auto& p : m.machine.alphabet.props()) {
    props.push_back({{"atom", p.atom}, {"sign", sign_name(p.sign)}});
  }
  j["props"] = props;
  j["initial"] = m.machine.initial;
  ordered_json out = ordered_json::array();
  for (Verdict v : m.machine.output) out.push_back(verdict_name(v));
  j["output"] = out;
  j["next"] = m.machine.next;
  return j.dump() + "\n";
}

std::shared_ptr<const MonitorMachine> machine_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw Error(std::string("machine file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "ratmon-machine" || j.at("version") != 1) {
      throw Error("unsupported machine file format");
    }
    auto m = std::make_shared<MonitorMachine>();
    std::string mode = j.at("mode");
    if (mode == "standard") m->mode = MonitorMode::Standard;
    else if (mode == "imperfect") m->mode = MonitorMode::Imperfect;
    else throw Error("unknown mode '" + mode + "'");
    m->formula = parse_formula(j.at("formula").get<std::string>());
    m->classes = Partition(j.at("classes").get<std::vector<std::vector<Atom>>>());
    std::vector<Prop> props;
    for (const auto& p : j.at("props")) {
      props.push_back(Prop{p.at("atom").get<std::string>(), parse_sign(p.at("sign")), {}});
    }
    m->machine.alphabet = Alphabet(props);
    if (m->machine.alphabet.size() != props.size()) throw Error("duplicate propositions");
    m->machine.initial = j.at("initial");
    for (const auto& v : j.at("output")) m->machine.output.push_back(parse_verdict(v.get<std::string>()));
    m->machine.next = j.at("next").get<std::vector<std::vector<std::uint32_t>>>();
    std::size_t n = m->machine.output.size();
    if (m->machine.next.size() != n || m->machine.initial >= n) throw Error("inconsistent state count");
    for (const auto& row : m->machine.next) {
      if (row.size() != m->machine.alphabet.valuation_count()) throw Error("bad transition row");
      for (auto t : row) {
        if (t >= n) throw Error("transition to unknown state");
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed machine file: ") + e.what());
  }
}

std::string report_to_json(const RunReport& r) {
  ordered_json j;
  j["mode"] = r.mode;
  j["formula"] = r.formula;
  ordered_json steps = ordered_json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"index", s.index}, {"event", s.event}, {"verdict", verdict_name(s.verdict)}});
  }
  j["steps"] = steps;
  j["final"] = verdict_name(r.final);
  ordered_json windows = ordered_json::array();
  for (const auto& w : r.broken_per_window) windows.push_back(std::vector<ClassId>(w.begin(), w.end()));
  j["broken_per_window"] = windows;
  if (r.with_timing) {
    j["timing"] = {{"synthesis_ms", r.synthesis_ms},
                   {"verify_ms", r.verify_ms},
                   {"per_event_ns", r.per_event_ns}};
  } else {
    j["timing"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace ratmon::io
