#include "ratmon/random.hpp"

#include "ratmon/error.hpp"

namespace ratmon {

Formula random_formula(Rng& rng, int operators, const std::vector<Atom>& pool) {
  if (pool.empty()) throw Error("empty atom pool");
  if (operators <= 0) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return Formula::atom(pool[pick(rng)]);
  }
  std::uniform_int_distribution<int> conn(0, 8);
  int c = conn(rng);
  if (c < 4) {
    Formula sub = random_formula(rng, operators - 1, pool);
    switch (c) {
      case 0: return Formula::negation(sub);
      case 1: return Formula::next(sub);
      case 2: return Formula::eventually(sub);
      default: return Formula::always(sub);
    }
  }
  std::uniform_int_distribution<int> split(0, operators - 1);
  int left = split(rng);
  Formula a = random_formula(rng, left, pool);
  Formula b = random_formula(rng, operators - 1 - left, pool);
  switch (c) {
    case 4: return Formula::conj(a, b);
    case 5: return Formula::disj(a, b);
    case 6: return Formula::implies(a, b);
    case 7: return Formula::until(a, b);
    default: return Formula::release(a, b);
  }
}

PlainEvent random_plain_event(Rng& rng, const std::vector<Atom>& pool) {
  PlainEvent e;
  std::bernoulli_distribution coin(0.5);
  for (const auto& a : pool) {
    if (coin(rng)) e.insert(a);
  }
  return e;
}

PlainTrace random_plain_trace(Rng& rng, std::size_t length, const std::vector<Atom>& pool) {
  PlainTrace t;
  t.reserve(length);
  for (std::size_t i = 0; i < length; ++i) t.push_back(random_plain_event(rng, pool));
  return t;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace ratmon
