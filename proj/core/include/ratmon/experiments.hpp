#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ratmon/verdict.hpp"

namespace ratmon::experiments {

struct MetricsConfig {
  std::size_t formulas = 1000;
  std::size_t traces = 20;
  std::uint64_t seed = 1;
  std::vector<std::string> metrics = {"metric0", "metric1", "metric2", "metric3"};
  int min_operators = 1;
  int max_operators = 6;
  std::size_t min_length = 1;
  std::size_t max_length = 12;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct MetricCounts {
  std::string metric;
  std::array<std::size_t, 6> counts{};  // indexed like kAllVerdicts
  std::size_t total = 0;

  std::size_t count(Verdict v) const;
  double rate(Verdict v) const;
};

// Active-monitor runs over a seeded corpus. Each formula draws a 4-atom
// pool split into one 2-atom class and singletons, a cost in 1..3 and
// bound 2; every metric sees the same formulas and traces.
std::vector<MetricCounts> run_metrics(const MetricsConfig& cfg);
std::string metrics_csv(const std::vector<MetricCounts>& rows);

struct TimingRow {
  std::size_t size_or_length = 0;
  double mean_ms = 0;
  double stddev_ms = 0;
  double median_ms = 0;
};

// Synthesis time of imperfect monitors for random formulas per size.
std::vector<TimingRow> bench_synthesis(const std::vector<int>& sizes, std::uint64_t seed,
                                       int reps = 5, int formulas_per_size = 10);
// Time to run one trace of each length through a fixed case-study machine.
std::vector<TimingRow> bench_verify(const std::vector<std::size_t>& lengths, std::uint64_t seed,
                                    int reps = 5);
std::string timing_csv(const std::vector<TimingRow>& rows);

}  // namespace ratmon::experiments
