#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ratmon/formula.hpp"
#include "ratmon/rational.hpp"
#include "ratmon/verdict.hpp"
#include "ratmon/visibility.hpp"

// The rover inspection scenario: three buildings b1..b3, a pair of
// indistinguishable sensors c/s, three indistinguishable gauges
// alpha/beta/gamma, a message buffer mb and a wait flag w.
namespace ratmon::casestudy {

struct Property {
  std::string name;
  std::string text;
};

const std::vector<Property>& properties();
VisibilitySpec spec();  // with costs cs=2, alphabetagamma=3, b*=3
PlainTrace plain_trace();   // the closed-world run
PlainTrace global_trace();  // the full run with hidden atoms

enum class Config { Standard, Imperfect, Active1, Active2, Reactive };
inline constexpr std::array<Config, 5> kConfigs = {Config::Standard, Config::Imperfect,
                                                   Config::Active1, Config::Active2,
                                                   Config::Reactive};
std::string config_name(Config c);

RationalConfig reactive_config();
// Reference grid, rows in kConfigs order.
const std::vector<std::vector<Verdict>>& expected_grid();

struct Cell {
  Config config;
  std::size_t property;
  Verdict verdict;
  Verdict expected;
  std::optional<Verdict> oracle;
  SignedTrace visible;  // empty for the standard row
};

struct Grid {
  std::vector<Cell> cells;  // row-major
  double elapsed_ms = 0;
};

Grid run(bool with_oracle);

}  // namespace ratmon::casestudy
