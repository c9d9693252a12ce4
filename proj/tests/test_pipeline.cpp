#include <random>

#include <gtest/gtest.h>

#include "mmsfair/harness/generators.hpp"
#include "mmsfair/pipeline.hpp"
#include "support/oracles.hpp"

using namespace mmsfair;

namespace {

std::vector<Value> brute_shares(const Instance& inst) {
  std::vector<Value> out;
  for (const auto& row : inst.valuation) out.push_back(ref::brute_mms(row, inst.agents()));
  return out;
}

// Everything downstream of the reductions, checked from the recorded stages.
void check_stages(const Instance& inst, const SolveReport& rep, MmsOracle& oracle) {
  const auto& st = rep.stages;
  const Value& alpha = rep.alpha.alpha;
  if (st.kept.empty()) return;
  ASSERT_TRUE(st.reductions && st.ordered_allocation && st.reduced_allocation && st.kept_allocation);

  // First ordering: lifted bundles dominate ordered ones.
  for (AgentIndex i = 0; i < st.kept.size(); ++i) {
    EXPECT_GE(bundle_value(st.kept_instance, i, st.kept_allocation->bundles[i]),
              bundle_value(st.first_order.instance, i, st.ordered_allocation->bundles[i]));
  }
  // Reductions: each reinstated agent meets alpha times its share at that time.
  for (const auto& rec : st.reductions->records) {
    EXPECT_GE(bundle_value(st.first_order.instance, rec.agent, rec.removed_goods), alpha * rec.pre_mms[rec.agent_index]);
    EXPECT_EQ(st.ordered_allocation->bundles[rec.agent], rec.removed_goods);
  }
  if (st.second_order) {
    const Instance& oni = st.second_order->instance;
    const auto shares = oracle.all_mms(oni);
    EXPECT_EQ(shares, std::vector<Value>(oni.agents(), Value(1)));
    EXPECT_TRUE(is_ordered(oni));
    EXPECT_TRUE(check_irreducible(oni, alpha, shares).empty());
    EXPECT_TRUE(check_rank_bounds(oni, alpha, shares).empty());
    EXPECT_TRUE(check_goods_count(oni).empty());
    EXPECT_TRUE(check_pair_bound(oni).empty());
    EXPECT_TRUE(check_dummy_bound(oni, alpha).empty());
    // Second ordering: lift dominates the bag-filling allocation in normalized terms.
    const Instance& norm = st.normalized->instance;
    for (AgentIndex i = 0; i < oni.agents(); ++i) {
      EXPECT_GE(bundle_value(norm, i, st.reduced_allocation->bundles[i]),
                bundle_value(oni, i, st.oni_allocation->bundles[i]));
    }
  }
  (void)inst;
}

}  // namespace

TEST(AlphaFor, ImprovedPicksTheSmallerBonus) {
  EXPECT_LT(Value(1, 36), Value(3, 16 * 3 - 4));
  EXPECT_EQ(alpha_for(3, ImprovedAlpha{}).alpha, Value(3, 4) + Value(1, 36));
  EXPECT_EQ(alpha_for(3, ImprovedAlpha{}).delta, Value(1, 36));
  EXPECT_LT(Value(3, 16 * 9 - 4), Value(1, 36));
  EXPECT_EQ(alpha_for(9, ImprovedAlpha{}).alpha, Value(3, 4) + Value(3, 140));
  // The two bonuses cross between 7 and 8 agents.
  EXPECT_EQ(alpha_for(7, ImprovedAlpha{}).alpha, Value(7, 9));
  EXPECT_EQ(alpha_for(8, ImprovedAlpha{}).alpha, Value(3, 4) + Value(3, 124));
}

TEST(AlphaFor, ClassicAndExplicit) {
  for (std::size_t n : {1u, 2u, 5u, 40u}) {
    EXPECT_EQ(alpha_for(n, ClassicAlpha{}).alpha, Value(3, 4));
    EXPECT_EQ(alpha_for(n, ClassicAlpha{}).delta, Value(0));
  }
  const auto c = alpha_for(4, Value(1, 2));
  EXPECT_EQ(c.alpha, Value(1, 2));
  EXPECT_EQ(c.delta, Value(-1, 4));
  EXPECT_EQ(c.n_original, 4u);
  EXPECT_THROW(alpha_for(4, Value(4, 5)), ValidationError);
  EXPECT_THROW(alpha_for(4, Value(0)), ValidationError);
  EXPECT_THROW(alpha_for(0, ClassicAlpha{}), ContractError);
  EXPECT_TRUE(std::holds_alternative<ClassicAlpha>(parse_alpha_mode("classic")));
  EXPECT_TRUE(std::holds_alternative<ImprovedAlpha>(parse_alpha_mode("improved")));
  EXPECT_EQ(std::get<Value>(parse_alpha_mode("3/4")), Value(3, 4));
  EXPECT_THROW(parse_alpha_mode("best"), ValidationError);
}

TEST(ApproxMms, SingleAgentTakesEverything) {
  const Instance inst = make_instance({{3, 0, 5}});
  const auto rep = approx_mms(inst, alpha_for(1, ImprovedAlpha{}));
  EXPECT_EQ(rep.allocation.bundles[0].size(), 3u);
  EXPECT_GE(rep.score, Value(1));
}

TEST(ApproxMms, TightExampleNThree) {
  const auto ex = harness::gen_tight_example(3);
  const auto choice = alpha_for(3, ImprovedAlpha{});
  MmsOracle oracle;
  const auto rep = approx_mms(ex.instance, choice, oracle);
  EXPECT_GE(rep.score, choice.alpha);
  EXPECT_LE(rep.score, Value(9, 10));
  check_stages(ex.instance, rep, oracle);
}

TEST(ApproxMms, RandomThreeByNine) {
  harness::GeneratorSpec spec;
  spec.n = 3;
  spec.m = 9;
  spec.value_bound = 100;
  spec.seed = 2024;
  const Instance inst = harness::gen_random(spec);
  const auto choice = alpha_for(3, ImprovedAlpha{});
  MmsOracle oracle;
  const auto rep = approx_mms(inst, choice, oracle);
  EXPECT_GE(mms_score(inst, rep.allocation, brute_shares(inst)), choice.alpha);
  EXPECT_EQ(rep.score, mms_score(inst, rep.allocation, brute_shares(inst)));
  check_stages(inst, rep, oracle);
}

TEST(ApproxMms, AllZeroInstancePeelsEveryone) {
  const Instance inst = make_instance({{0, 0, 0}, {0, 0, 0}});
  const auto rep = approx_mms(inst, alpha_for(2, ImprovedAlpha{}));
  EXPECT_EQ(rep.stages.peeled, (std::vector<AgentIndex>{0, 1}));
  EXPECT_TRUE(rep.allocation.complete);
  EXPECT_EQ(rep.score, Value(1));
  for (const auto& a : rep.agents) EXPECT_FALSE(a.ratio);
}

TEST(ApproxMms, ZeroShareAgentIsPeeledAndOthersServed) {
  // Agent 1 likes one good only: with 3 agents its share is 0.
  const Instance inst = make_instance({{5, 4, 3, 3, 2, 2, 1}, {9, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1}});
  MmsOracle oracle;
  const auto choice = alpha_for(3, ImprovedAlpha{});
  const auto rep = approx_mms(inst, choice, oracle);
  EXPECT_EQ(rep.stages.peeled, (std::vector<AgentIndex>{1}));
  EXPECT_GE(rep.score, choice.alpha);
  check_stages(inst, rep, oracle);
}

TEST(ApproxMms, RejectsDummiesAndMismatchedAlpha) {
  Instance inst = make_instance({{1, 1}, {1, 1}});
  EXPECT_THROW(approx_mms(inst, alpha_for(3, ImprovedAlpha{})), ContractError);
  inst.dummies.push_back(GoodId::dummy(0));
  for (auto& r : inst.valuation) r.push_back(Value(1));
  EXPECT_THROW(approx_mms(inst, alpha_for(2, ImprovedAlpha{})), ContractError);
}

TEST(ApproxMms, CapacityErrorsPropagate) {
  const Instance inst = make_instance(std::vector<std::vector<Value>>(2, std::vector<Value>(21, Value(1))));
  EXPECT_THROW(approx_mms(inst, alpha_for(2, ImprovedAlpha{})), CapacityError);
}

TEST(ApproxMms, RandomInstancesMeetAlphaAtEveryBoundary) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 60; ++t) {
    harness::GeneratorSpec spec;
    spec.kind = t % 2 ? harness::GeneratorKind::UniformInt : harness::GeneratorKind::UniformRational;
    spec.n = 2 + rng() % 3;
    spec.m = spec.n + rng() % 7;
    spec.value_bound = 1 + static_cast<long>(rng() % 30);
    spec.seed = rng();
    const Instance inst = harness::gen_random(spec);
    for (const AlphaMode& mode : {AlphaMode{ClassicAlpha{}}, AlphaMode{ImprovedAlpha{}}}) {
      const auto choice = alpha_for(spec.n, mode);
      MmsOracle oracle;
      const auto rep = approx_mms(inst, choice, oracle);
      EXPECT_GE(rep.score, choice.alpha);
      check_stages(inst, rep, oracle);
    }
  }
}

TEST(ApproxMms, TraceJsonIsWellFormed) {
  const auto ex = harness::gen_tight_example(3);
  const auto rep = approx_mms(ex.instance, alpha_for(3, ClassicAlpha{}));
  const json j = json::parse(detail::stages_trace_json(rep.stages));
  ASSERT_TRUE(j.contains("reductions"));
  EXPECT_EQ(j["reductions"][0]["rule"], "R2");
  EXPECT_EQ(j["reductions"][0]["goods"], json({"r3", "r4"}));
}
