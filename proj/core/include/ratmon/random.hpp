#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ratmon/formula.hpp"
#include "ratmon/visibility.hpp"

namespace ratmon {

using Rng = std::mt19937_64;

// Uniform over ! X F G & | -> U R; `operators` counts operator nodes.
Formula random_formula(Rng& rng, int operators, const std::vector<Atom>& pool);
PlainEvent random_plain_event(Rng& rng, const std::vector<Atom>& pool);
PlainTrace random_plain_trace(Rng& rng, std::size_t length, const std::vector<Atom>& pool);

// Independent seed for task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ratmon
