#include "ratmon/case_study.hpp"

#include <chrono>

#include "ratmon/error.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/oracle.hpp"

namespace ratmon::casestudy {

const std::vector<Property>& properties() {
  static const std::vector<Property> props = {
      {"phi1", "F (c & X w)"},
      {"phi2", "F (gamma & (b1 | b2 | b3) & X mb)"},
      {"phi3", "F ((!c & b1 & X b2) | (!c & b2 & X b3))"},
      {"psi1", "G ((b1 | b2 | b3) -> X !c)"},
      {"psi2", "G (gamma -> !(b1 | b2 | b3))"},
      {"psi3", "G (!gamma -> !mb)"},
      {"psi1|psi2", "G ((b1 | b2 | b3) -> X !c) | G (gamma -> !(b1 | b2 | b3))"},
  };
  return props;
}

VisibilitySpec spec() {
  return VisibilitySpec::make({"b1", "b2", "b3", "c", "s", "alpha", "beta", "gamma", "mb", "w"},
                              {{"c", "s"}, {"alpha", "beta"}, {"beta", "gamma"}},
                              {{"cs", 2}, {"alphabetagamma", 3}});
}

PlainTrace plain_trace() { return {{}, {"b1"}, {"mb", "b2"}, {}, {"w"}}; }

PlainTrace global_trace() {
  return {{}, {"gamma", "b1", "c"}, {"gamma", "c", "mb", "b2"}, {"c"}, {"w"}};
}

std::string config_name(Config c) {
  switch (c) {
    case Config::Standard: return "standard";
    case Config::Imperfect: return "imperfect";
    case Config::Active1: return "active-1";
    case Config::Active2: return "active-2";
    case Config::Reactive: return "reactive";
  }
  return "?";
}

RationalConfig reactive_config() {
  RationalConfig cfg;
  cfg.metric = MetricSpec::builtin("metric2");
  cfg.bound = 3;
  cfg.window = 2;
  cfg.seed = 0;
  return cfg;
}

const std::vector<std::vector<Verdict>>& expected_grid() {
  using V = Verdict;
  const V T = V::True, F = V::False, U = V::Unknown, NF = V::UnknownNotFalse,
          NT = V::UnknownNotTrue;
  static const std::vector<std::vector<Verdict>> grid = {
      {U, U, T, U, U, F, U},
      {NF, NF, NF, NT, NT, NT, NT},
      {T, NF, U, F, NT, NT, NT},
      {T, NF, U, NT, F, NT, NT},
      {T, NF, U, F, F, NT, F},
  };
  return grid;
}

Grid run(bool with_oracle) {
  auto start = std::chrono::steady_clock::now();
  VisibilitySpec vs = spec();
  Grid grid;
  const auto& props = properties();
  constexpr std::size_t kOracleBound = 2;
  for (std::size_t row = 0; row < kConfigs.size(); ++row) {
    Config cfg = kConfigs[row];
    for (std::size_t i = 0; i < props.size(); ++i) {
      Formula f = parse_formula(props[i].text);
      Cell cell{cfg, i, Verdict::Unknown, expected_grid()[row][i], std::nullopt, {}};
      if (cfg == Config::Standard) {
        std::vector<Verdict> steps = run(build_standard(f), plain_trace());
        cell.verdict = steps.back();
      } else {
        RationalRun r;
        if (cfg == Config::Reactive) {
          r = reactive_monitor(global_trace(), f, vs, reactive_config());
        } else {
          std::set<ClassId> broken;
          if (cfg == Config::Active1) broken = {"cs"};
          if (cfg == Config::Active2) broken = {"alphabetagamma"};
          r = fixed_break_run(global_trace(), build_imperfect(f, vs.classes), vs, broken);
        }
        cell.verdict = r.final;
        cell.visible = std::move(r.visible);
      }
      bool flagged = cfg == Config::Active2 && i == 0;
      if (with_oracle && (flagged || cell.verdict != cell.expected)) {
        if (cfg == Config::Standard) {
          cell.oracle = oracle::standard_verdict(f, plain_trace(), kOracleBound);
        } else {
          cell.oracle = oracle::oracle_verdict(f, vs.classes, cell.visible, kOracleBound);
        }
      }
      grid.cells.push_back(std::move(cell));
    }
  }
  grid.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return grid;
}

}  // namespace ratmon::casestudy
