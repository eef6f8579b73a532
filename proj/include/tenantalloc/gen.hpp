#pragma once

// Seeded random markets. The draw sequence is part of the contract:
//   1. for each agent in index order: bernoulli(endow_prob);
//   2. for each agent that drew "endowed", in index order: if unowned houses
//      remain, take the below(k)-th of the k unowned houses (index order);
//   3. for each agent, for each house, in index order: bernoulli(accept_prob).
// All draws come from one SplitMix64 stream seeded with `seed`.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tenantalloc/error.hpp"
#include "tenantalloc/model.hpp"
#include "tenantalloc/random.hpp"

namespace tenantalloc {

struct GenParams {
  std::size_t agents = 0;
  std::size_t houses = 0;
  double endow_prob = 0.5;
  double accept_prob = 0.5;
  std::uint64_t seed = 0;
};

inline void validate(const GenParams& p) {
  auto prob_ok = [](double v) { return v >= 0.0 && v <= 1.0; };  // rejects NaN
  if (!prob_ok(p.endow_prob)) throw Error(ErrorCode::invalid_params, "endow_prob outside [0,1]");
  if (!prob_ok(p.accept_prob)) throw Error(ErrorCode::invalid_params, "accept_prob outside [0,1]");
}

inline Instance random_instance(const GenParams& p) {
  validate(p);
  SplitMix64 rng(p.seed);
  const std::size_t n = p.agents;
  const std::size_t m = p.houses;

  std::vector<char> wants_house(n);
  for (std::size_t a = 0; a < n; ++a) wants_house[a] = rng.bernoulli(p.endow_prob);

  std::vector<HouseIndex> unowned(m);
  for (HouseIndex h = 0; h < m; ++h) unowned[h] = h;
  std::vector<HouseSlot> endowment(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!wants_house[a] || unowned.empty()) continue;
    const auto k = static_cast<std::size_t>(rng.below(unowned.size()));
    endowment[a] = unowned[k];
    unowned.erase(unowned.begin() + static_cast<std::ptrdiff_t>(k));
  }

  std::vector<std::vector<HouseIndex>> acceptable(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (HouseIndex h = 0; h < m; ++h) {
      if (rng.bernoulli(p.accept_prob)) acceptable[a].push_back(h);
    }
  }
  return Instance::from_indices(n, m, endowment, acceptable);
}

}  // namespace tenantalloc
