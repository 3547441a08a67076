#include "ratmon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <mutex>
#include <thread>

#include "ratmon/case_study.hpp"
#include "ratmon/error.hpp"
#include "ratmon/monitor.hpp"
#include "ratmon/random.hpp"
#include "ratmon/rational.hpp"

namespace ratmon::experiments {

namespace {

std::size_t verdict_index(Verdict v) {
  for (std::size_t i = 0; i < kAllVerdicts.size(); ++i) {
    if (kAllVerdicts[i] == v) return i;
  }
  return 0;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

TimingRow summarize(std::size_t key, std::vector<double> ms) {
  TimingRow r;
  r.size_or_length = key;
  if (ms.empty()) return r;
  r.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  double var = 0;
  for (double x : ms) var += (x - r.mean_ms) * (x - r.mean_ms);
  r.stddev_ms = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1)) : 0;
  std::sort(ms.begin(), ms.end());
  std::size_t m = ms.size() / 2;
  r.median_ms = ms.size() % 2 ? ms[m] : (ms[m - 1] + ms[m]) / 2;
  return r;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::size_t MetricCounts::count(Verdict v) const { return counts[verdict_index(v)]; }

double MetricCounts::rate(Verdict v) const {
  return total == 0 ? 0.0 : static_cast<double>(count(v)) / static_cast<double>(total);
}

std::vector<MetricCounts> run_metrics(const MetricsConfig& cfg) {
  if (cfg.formulas == 0 || cfg.traces == 0) throw Error("metrics experiment needs N, M >= 1");
  std::vector<MetricSpec> specs;
  for (const auto& m : cfg.metrics) specs.push_back(MetricSpec::builtin(m));
  const std::vector<Atom> pool = {"p", "q", "r", "s"};

  // per formula, per metric
  std::vector<std::vector<std::array<std::size_t, 6>>> partial(
      cfg.formulas, std::vector<std::array<std::size_t, 6>>(specs.size()));
  parallel_for(cfg.formulas, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, i));
    std::uniform_int_distribution<int> ops(cfg.min_operators, cfg.max_operators);
    Formula f = random_formula(rng, ops(rng), pool);
    std::vector<Atom> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::uniform_int_distribution<int> cost(1, 3);
    ClassId cls_id;
    {
      std::vector<Atom> pair = {shuffled[0], shuffled[1]};
      std::sort(pair.begin(), pair.end());
      cls_id = pair[0] + pair[1];
    }
    VisibilitySpec vs = VisibilitySpec::make({pool.begin(), pool.end()},
                                             {{shuffled[0], shuffled[1]}}, {{cls_id, cost(rng)}});
    auto machine = build_imperfect(f, vs.classes);
    std::vector<std::set<ClassId>> breaks;
    for (const auto& spec : specs) breaks.push_back(select_breaks(f, vs, spec, 2, cfg.seed));
    std::uniform_int_distribution<std::size_t> len(cfg.min_length, cfg.max_length);
    for (std::size_t j = 0; j < cfg.traces; ++j) {
      PlainTrace t = random_plain_trace(rng, len(rng), pool);
      for (std::size_t k = 0; k < specs.size(); ++k) {
        Verdict v = fixed_break_run(t, machine, vs, breaks[k]).final;
        ++partial[i][k][verdict_index(v)];
      }
    }
  });

  std::vector<MetricCounts> out;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    MetricCounts mc;
    mc.metric = specs[k].name;
    for (std::size_t i = 0; i < cfg.formulas; ++i) {
      for (std::size_t v = 0; v < 6; ++v) mc.counts[v] += partial[i][k][v];
    }
    mc.total = std::accumulate(mc.counts.begin(), mc.counts.end(), std::size_t{0});
    out.push_back(mc);
  }
  return out;
}

std::string metrics_csv(const std::vector<MetricCounts>& rows) {
  std::ostringstream os;
  os << "metric,total";
  for (Verdict v : kAllVerdicts) os << ',' << verdict_name(v);
  for (Verdict v : kAllVerdicts) os << ',' << verdict_name(v) << "_pct";
  os << '\n';
  os.setf(std::ios::fixed);
  os.precision(2);
  for (const auto& r : rows) {
    os << r.metric << ',' << r.total;
    for (Verdict v : kAllVerdicts) os << ',' << r.count(v);
    for (Verdict v : kAllVerdicts) os << ',' << 100.0 * r.rate(v);
    os << '\n';
  }
  return os.str();
}

std::vector<TimingRow> bench_synthesis(const std::vector<int>& sizes, std::uint64_t seed, int reps,
                                       int formulas_per_size) {
  const std::vector<Atom> pool = {"p", "q", "r", "s"};
  Partition classes({{"p", "q"}, {"r"}, {"s"}});
  std::vector<TimingRow> out;
  for (int size : sizes) {
    if (size <= 0) throw Error("sizes must be positive");
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(size)));
    std::vector<Formula> formulas;
    for (int i = 0; i < formulas_per_size; ++i) formulas.push_back(random_formula(rng, size, pool));
    std::vector<double> ms;
    for (int r = 0; r < reps; ++r) {
      auto start = std::chrono::steady_clock::now();
      for (const auto& f : formulas) build_imperfect(f, classes);
      ms.push_back(elapsed_ms(start) / static_cast<double>(formulas.size()));
    }
    out.push_back(summarize(static_cast<std::size_t>(size), std::move(ms)));
  }
  return out;
}

std::vector<TimingRow> bench_verify(const std::vector<std::size_t>& lengths, std::uint64_t seed,
                                    int reps) {
  VisibilitySpec vs = casestudy::spec();
  const auto& props = casestudy::properties();
  auto machine = build_imperfect(parse_formula(props.back().text), vs.classes);
  std::vector<Atom> pool(vs.alphabet.begin(), vs.alphabet.end());
  std::vector<TimingRow> out;
  for (std::size_t len : lengths) {
    if (len == 0) throw Error("lengths must be positive");
    Rng rng(derive_seed(seed, len));
    SignedTrace visible =
        visible_trace(explicit_trace(random_plain_trace(rng, len, pool), vs.alphabet), vs.classes, {});
    // Short traces are repeated so that each sample covers enough events
    // to rise above clock resolution.
    std::size_t repeat = std::max<std::size_t>(1, 200000 / len);
    std::vector<double> ms;
    std::size_t sink = 0;
    for (int r = 0; r < reps; ++r) {
      auto start = std::chrono::steady_clock::now();
      for (std::size_t k = 0; k < repeat; ++k) {
        Monitor m(machine);
        for (const auto& e : visible) m.step(e);
        sink += m.state();
      }
      ms.push_back(elapsed_ms(start) / static_cast<double>(repeat));
    }
    if (sink == static_cast<std::size_t>(-1)) ms.push_back(0);
    out.push_back(summarize(len, std::move(ms)));
  }
  return out;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  std::ostringstream os;
  os << "size_or_length,mean_ms,stddev,median_ms\n";
  os.precision(6);
  for (const auto& r : rows) {
    os << r.size_or_length << ',' << r.mean_ms << ',' << r.stddev_ms << ',' << r.median_ms << '\n';
  }
  return os.str();
}

}  // namespace ratmon::experiments
