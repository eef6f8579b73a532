#include <gtest/gtest.h>

#include "tenantalloc/gen.hpp"
#include "tenantalloc/io.hpp"
#include "tenantalloc/oracles.hpp"
#include "tenantalloc/random.hpp"

namespace ta = tenantalloc;

TEST(SplitMix64, ReferenceOutput) {
  ta::SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
}

TEST(Gen, EmptyMarket) {
  const auto inst = ta::random_instance({0, 0, 0.5, 0.5, 123});
  EXPECT_EQ(inst.agent_count(), 0u);
  EXPECT_EQ(inst.house_count(), 0u);
}

TEST(Gen, PureEndowmentEconomy) {
  const auto inst = ta::random_instance({3, 3, 1.0, 0.0, 9});
  for (ta::AgentIndex a = 0; a < 3; ++a) {
    EXPECT_TRUE(inst.is_endowed(a));
    EXPECT_TRUE(inst.acceptable(a).empty());
  }
}

TEST(Gen, ReferenceVector) {
  // Reproduced independently from the documented draw sequence.
  const auto inst = ta::random_instance({5, 6, 0.8, 0.3, 42});
  const std::vector<ta::HouseSlot> endow{5, 1, 4, 2, 3};
  const std::vector<std::vector<ta::HouseIndex>> acc{{0, 5}, {0, 2, 5}, {2, 3}, {}, {2, 3, 5}};
  EXPECT_EQ(inst, ta::Instance::from_indices(5, 6, endow, acc));
  const auto best = ta::max_welfare(inst);
  EXPECT_LE(best, 5u);
}

TEST(Gen, InvalidParams) {
  EXPECT_THROW(ta::random_instance({1, 1, 1.5, 0.5, 0}), ta::Error);
  EXPECT_THROW(ta::random_instance({1, 1, 0.5, -0.1, 0}), ta::Error);
  EXPECT_THROW(ta::random_instance({1, 1, std::nan(""), 0.5, 0}), ta::Error);
}

TEST(GenProperty, DeterministicAndValid) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const ta::GenParams p{seed % 9, (seed * 7) % 9, (seed % 5) / 4.0, (seed % 3) / 2.0, seed};
    const auto a = ta::random_instance(p);
    const auto b = ta::random_instance(p);
    ASSERT_EQ(ta::write_instance(a), ta::write_instance(b));
    ASSERT_NO_THROW(ta::validate_instance(a.to_raw()));
    std::size_t endowed = 0;
    for (ta::AgentIndex i = 0; i < a.agent_count(); ++i) endowed += a.is_endowed(i);
    ASSERT_LE(endowed, std::min(p.agents, p.houses));
  }
}

TEST(GenProperty, CoversAllRegimes) {
  bool fewer_agents = false, equal = false, more_agents = false, unendowed = false,
       unowned = false, empty_set = false, acceptable_endowment = false;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = ta::random_instance({1 + seed % 6, 1 + (seed / 6) % 6, 0.6, 0.3, seed});
    const auto n = inst.agent_count(), m = inst.house_count();
    fewer_agents |= n < m;
    equal |= n == m;
    more_agents |= n > m;
    for (ta::AgentIndex a = 0; a < n; ++a) {
      unendowed |= !inst.is_endowed(a);
      empty_set |= inst.acceptable(a).empty();
      acceptable_endowment |= inst.has_acceptable_endowment(a);
    }
    for (ta::HouseIndex h = 0; h < m; ++h) unowned |= !inst.owner(h).has_value();
  }
  EXPECT_TRUE(fewer_agents && equal && more_agents);
  EXPECT_TRUE(unendowed && unowned && empty_set && acceptable_endowment);
}
