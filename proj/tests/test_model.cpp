#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "tenantalloc/gen.hpp"
#include "tenantalloc/model.hpp"
#include "test_support.hpp"

namespace ta = tenantalloc;
using ta::testing::e1;

namespace {

ta::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ta::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ta::ErrorCode::internal_error;
}

}  // namespace

TEST(Model, ExampleMarketIsValid) {
  const auto inst = e1();
  EXPECT_EQ(inst.agent_count(), 5u);
  EXPECT_EQ(inst.house_count(), 6u);
  EXPECT_EQ(inst.endowment(0), 0u);
  EXPECT_FALSE(inst.is_endowed(4));
  EXPECT_EQ(inst.acceptable(4), (std::vector<ta::HouseIndex>{4, 5}));
  EXPECT_FALSE(inst.owner(5).has_value());
  EXPECT_EQ(inst.owner(3), 3u);
}

TEST(Model, EmptyInstanceIsValid) {
  const auto inst = ta::validate_instance({});
  EXPECT_EQ(inst.agent_count(), 0u);
  EXPECT_EQ(inst.house_count(), 0u);
}

TEST(Model, ValidationErrors) {
  ta::RawInstance dup_owner{{{"1", "h1", {}}, {"2", "h1", {}}}, {"h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(dup_owner); }),
            ta::ErrorCode::duplicate_endowment);

  ta::RawInstance unknown{{{"1", "h9", {}}}, {"h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(unknown); }), ta::ErrorCode::unknown_house);

  ta::RawInstance unknown_acc{{{"1", std::nullopt, {"h2"}}}, {"h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(unknown_acc); }), ta::ErrorCode::unknown_house);

  ta::RawInstance dup_agent{{{"1", std::nullopt, {}}, {"1", std::nullopt, {}}}, {"h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(dup_agent); }),
            ta::ErrorCode::duplicate_agent_id);

  ta::RawInstance dup_house{{}, {"h1", "h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(dup_house); }),
            ta::ErrorCode::duplicate_house_id);

  ta::RawInstance dup_acc{{{"1", std::nullopt, {"h1", "h1"}}}, {"h1"}};
  EXPECT_EQ(code_of([&] { ta::validate_instance(dup_acc); }),
            ta::ErrorCode::duplicate_acceptable_house);
}

TEST(Model, AcceptableEndowmentIsAllowed) {
  const auto inst = ta::Instance::from_indices(1, 1, {0}, {{0}});
  EXPECT_TRUE(inst.has_acceptable_endowment(0));
}

TEST(Model, Utility) {
  const auto inst = e1();
  EXPECT_EQ(ta::utility(inst, 0, 1), 1);
  EXPECT_EQ(ta::utility(inst, 0, std::nullopt), 0);
  EXPECT_EQ(ta::utility(inst, 3, 3), 0);
  EXPECT_EQ(code_of([&] { ta::utility(inst, 9, 0); }), ta::ErrorCode::unknown_agent);
}

TEST(Model, Welfare) {
  const auto inst = e1();
  EXPECT_EQ(ta::welfare(inst, ta::testing::e1_x()), 4u);
  EXPECT_EQ(ta::welfare(inst, ta::testing::e1_y()), 5u);
  EXPECT_EQ(ta::welfare(inst, ta::Allocation::empty(5)), 0u);
  EXPECT_EQ(ta::satisfied_set(inst, ta::testing::e1_x()),
            (std::vector<ta::AgentIndex>{0, 1, 2, 4}));
}

TEST(Model, InvalidAllocations) {
  const auto inst = e1();
  EXPECT_EQ(code_of([&] { ta::welfare(inst, ta::Allocation({0, 0, 1, 2, 3})); }),
            ta::ErrorCode::invalid_allocation);
  EXPECT_EQ(code_of([&] { ta::welfare(inst, ta::Allocation({0, 1, 2, 3, 6})); }),
            ta::ErrorCode::invalid_allocation);
  EXPECT_EQ(code_of([&] { ta::welfare(inst, ta::Allocation({0, 1})); }),
            ta::ErrorCode::invalid_allocation);
}

TEST(ModelProperty, WelfareBoundedAndRenamingInvariant) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = ta::random_instance({seed % 7, (seed / 7) % 7, 0.6, 0.4, seed});
    const auto x = ta::testing::random_allocation(rng, inst);
    const auto w = ta::welfare(inst, x);
    ASSERT_LE(w, std::min(inst.agent_count(), inst.house_count()));

    // Relabel agents and houses by random permutations.
    const std::size_t n = inst.agent_count(), m = inst.house_count();
    std::vector<std::size_t> pa(n), ph(m);
    std::iota(pa.begin(), pa.end(), 0u);
    std::iota(ph.begin(), ph.end(), 0u);
    std::shuffle(pa.begin(), pa.end(), rng);
    std::shuffle(ph.begin(), ph.end(), rng);
    std::vector<ta::HouseSlot> endow(n);
    std::vector<std::vector<ta::HouseIndex>> acc(n);
    std::vector<ta::HouseSlot> moved(n);
    for (std::size_t a = 0; a < n; ++a) {
      if (inst.endowment(a)) endow[pa[a]] = ph[*inst.endowment(a)];
      for (auto h : inst.acceptable(a)) acc[pa[a]].push_back(ph[h]);
      if (x[a]) moved[pa[a]] = ph[*x[a]];
    }
    const auto renamed = ta::Instance::from_indices(n, m, endow, acc);
    ASSERT_EQ(ta::welfare(renamed, ta::Allocation(moved)), w);
  }
}

TEST(ModelProperty, UtilityIgnoresEndowment) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = ta::random_instance({4, 4, 0.5, 0.5, seed});
    std::vector<ta::HouseSlot> none(4);
    std::vector<std::vector<ta::HouseIndex>> acc;
    for (std::size_t a = 0; a < 4; ++a) acc.push_back(inst.acceptable(a));
    const auto unendowed = ta::Instance::from_indices(4, 4, none, acc);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t h = 0; h < 4; ++h) {
        ASSERT_EQ(ta::utility(inst, a, h), ta::utility(unendowed, a, h));
      }
    }
  }
}
