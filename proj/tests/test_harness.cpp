#include <fstream>

#include <gtest/gtest.h>

#include "mmsfair/harness/bench.hpp"
#include "mmsfair/harness/generators.hpp"
#include "mmsfair/harness/io.hpp"
#include "mmsfair/harness/verify.hpp"
#include "support/oracles.hpp"

using namespace mmsfair;
using namespace mmsfair::harness;

namespace {

GoodId g(std::uint32_t rank) { return GoodId::real(rank - 1); }

json parse(const char* text) { return json::parse(text); }

std::string data_path(const std::string& name) { return std::string(MMSFAIR_TEST_DIR) + "/" + name; }

}  // namespace

TEST(Tight, ValuesForThreeAgents) {
  const auto ex = gen_tight_example(3);
  const std::vector<Value> expected{Value(5, 10), Value(5, 10), Value(4, 10), Value(4, 10),
                                    Value(3, 10), Value(3, 10), Value(3, 10), Value(3, 10)};
  for (const auto& row : ex.instance.valuation) EXPECT_EQ(row, expected);
  for (long j = 1; j <= 8; ++j) EXPECT_EQ(expected[static_cast<std::size_t>(j - 1)], ref::tight_value(3, j));
}

TEST(Tight, CertificateCellsAreWorthOne) {
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto ex = gen_tight_example(n);
    EXPECT_EQ(ex.instance.goods.size(), 3 * n - 1);
    EXPECT_EQ(ex.certificate.size(), n);
    for (const auto& cell : ex.certificate) EXPECT_EQ(bundle_value(ex.instance, 0, cell), Value(1));
    EXPECT_EQ(ref::sum(ex.instance.valuation[0]), Value(static_cast<long>(n)));
    EXPECT_EQ(certified_mms(ex.instance, n - 1, ex.certificate), Value(1));
  }
  EXPECT_EQ(gen_tight_example(3).certificate[1], (Bundle{g(3), g(6), g(7)}));
  EXPECT_THROW(gen_tight_example(1), ContractError);
}

TEST(Random, SameSpecSameInstance) {
  GeneratorSpec spec{GeneratorKind::UniformRational, 3, 7, 20, 99};
  EXPECT_EQ(gen_random(spec), gen_random(spec));
  spec.seed = 100;
  EXPECT_NE(gen_random(spec), gen_random(GeneratorSpec{GeneratorKind::UniformRational, 3, 7, 20, 99}));
}

TEST(Random, DrawsStayInRange) {
  const Instance ints = gen_random({GeneratorKind::UniformInt, 3, 12, 5, 1});
  for (const auto& row : ints.valuation) {
    for (const auto& v : row) {
      EXPECT_GE(v, Value(0));
      EXPECT_LE(v, Value(5));
      EXPECT_EQ(v.denominator(), 1);
    }
  }
  const Instance rats = gen_random({GeneratorKind::UniformRational, 3, 12, 5, 1});
  for (const auto& row : rats.valuation) {
    for (const auto& v : row) {
      EXPECT_GE(v, Value(0));
      EXPECT_LE(v, Value(5));
    }
  }
}

TEST(Random, ZeroBoundGivesZeroInstance) {
  const Instance inst = gen_random({GeneratorKind::UniformRational, 2, 5, 0, 3});
  for (const auto& row : inst.valuation) EXPECT_EQ(row, std::vector<Value>(5, Value(0)));
}

TEST(Random, MatchesGoldenFile) {
  const json golden = read_json_file(data_path("golden/random_n2_m4_b10_seed42.json"));
  const Instance inst = gen_random({GeneratorKind::UniformInt, 2, 4, 10, 42});
  EXPECT_EQ(instance_json(inst), golden);
  // Shares of the golden table, from exhaustive enumeration.
  const std::vector<Value> shares{9, 11};
  for (AgentIndex i = 0; i < 2; ++i) EXPECT_EQ(ref::brute_mms(inst.valuation[i], 2), shares[i]);
  MmsOracle oracle;
  EXPECT_EQ(oracle.all_mms(inst), shares);
}

TEST(SuiteSpec, CoversTheStatedRanges) {
  for (std::uint64_t k = 0; k < 300; ++k) {
    const auto spec = random_suite_spec(7, k);
    EXPECT_GE(spec.n, 2u);
    EXPECT_LE(spec.n, 4u);
    EXPECT_GE(spec.m, spec.n);
    EXPECT_LE(spec.m, 12u);
    EXPECT_EQ(spec.value_bound, 100);
  }
}

TEST(Verify, PipelineOutputPasses) {
  const Instance inst = gen_random({GeneratorKind::UniformInt, 3, 8, 50, 5});
  const auto choice = alpha_for(3, ImprovedAlpha{});
  const auto rep = approx_mms(inst, choice);
  MmsOracle oracle;
  const auto v = verify(inst, rep.allocation, choice.alpha, oracle);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.score, rep.score);
}

TEST(Verify, TightInitialBagsScoreTauByCertificate) {
  const auto ex = gen_tight_example(3);
  const Allocation alloc{{{g(1), g(6), g(7), g(8)}, {g(2), g(5)}, {g(3), g(4)}}, true};
  MmsOracle oracle;
  const auto v = verify(ex.instance, alloc, Value(8, 10), oracle, {ex.certificate});
  EXPECT_EQ(v.score, Value(8, 10));
  EXPECT_TRUE(v.pass);
  for (const auto& a : v.agents) EXPECT_TRUE(a.certified);
  EXPECT_EQ(oracle.searches(), 0u);
  EXPECT_FALSE(verify(ex.instance, alloc, Value(9, 10), oracle, {ex.certificate}).pass);
}

TEST(Verify, CertificateBeyondOracleCapacity) {
  const auto ex = gen_tight_example(12);  // 35 goods
  MmsOracle oracle;
  Allocation alloc{ex.certificate, true};
  const auto v = verify(ex.instance, alloc, Value(1), oracle, {ex.certificate});
  EXPECT_EQ(v.score, Value(1));
  EXPECT_THROW(verify(ex.instance, alloc, Value(1), oracle), CapacityError);
}

TEST(Verify, EverythingToAgentZeroFails) {
  const Instance inst = make_instance({{1, 2, 3}, {3, 2, 1}});
  const Allocation alloc{{{g(1), g(2), g(3)}, {}}, true};
  MmsOracle oracle;
  const auto v = verify(inst, alloc, Value(3, 4), oracle);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.agents[1].ratio, Value(0));
  EXPECT_EQ(v.score, Value(0));
}

TEST(Io, ReadsIntegerAndRationalValues) {
  const auto li = instance_from_json(parse(R"({"agents": 2, "goods": ["a", "b"],
      "valuations": {"0": {"a": 3, "b": "1/2"}, "1": {"b": "4/6", "a": 0}}})"));
  EXPECT_EQ(li.instance.valuation[0], (std::vector<Value>{3, Value(1, 2)}));
  EXPECT_EQ(li.instance.valuation[1], (std::vector<Value>{0, Value(2, 3)}));
  EXPECT_EQ(li.names.name(g(2)), "b");
  const json back = instance_to_json(li);
  EXPECT_EQ(back["valuations"]["1"]["b"], "2/3");
  EXPECT_EQ(instance_from_json(back).instance, li.instance);
}

TEST(Io, ReadsDummies) {
  const auto li = instance_from_json(parse(R"({"agents": 1, "goods": ["a"], "dummies": ["d"],
      "valuations": {"0": {"a": 1, "d": "1/9"}}})"));
  EXPECT_EQ(li.instance.dummies.size(), 1u);
  EXPECT_EQ(li.instance.valuation[0][1], Value(1, 9));
}

TEST(Io, SchemaErrorsNameTheField) {
  const char* cases[][2] = {
      {R"([1,2])", "instance"},
      {R"({"goods": ["a"], "valuations": {}})", "agents"},
      {R"({"agents": 1, "valuations": {"0": {}}})", "goods"},
      {R"({"agents": 1, "goods": ["a"]})", "valuations"},
      {R"({"agents": 1, "goods": ["a"], "valuations": {"0": {"a": -1}}})", "valuations[0]"},
      {R"({"agents": 1, "goods": ["a", "b"], "valuations": {"0": {"a": 1}}})", "valuations[0]"},
      {R"({"agents": 1, "goods": ["a"], "valuations": {"0": {"a": 1, "z": 2}}})", "valuations[0]"},
      {R"({"agents": 1, "goods": ["a"], "valuations": {"0": {"a": "x/2"}}})", "valuations[0][a]"},
      {R"({"agents": 1, "goods": ["a"], "valuations": {"0": {"a": 1.5}}})", "valuations[0][a]"},
      {R"({"agents": 2, "goods": ["a"], "valuations": {"0": {"a": 1}}})", "valuations"},
      {R"({"agents": 1, "goods": ["a"], "valuations": {"x": {"a": 1}}})", "valuations"},
      {R"({"agents": 1, "goods": ["a", "a"], "valuations": {"0": {"a": 1}}})", "goods"},
  };
  for (const auto& c : cases) {
    try {
      instance_from_json(parse(c[0]));
      ADD_FAILURE() << "accepted " << c[0];
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.field(), c[1]) << c[0] << ": " << e.what();
    }
  }
}

TEST(Io, AllocationsRoundTrip) {
  const auto li = instance_from_json(parse(R"({"agents": 2, "goods": ["a", "b", "c"],
      "valuations": {"0": {"a": 1, "b": 1, "c": 1}, "1": {"a": 1, "b": 1, "c": 1}}})"));
  const Allocation partial = allocation_from_json(parse(R"({"0": ["c"], "1": ["a"]})"), li);
  EXPECT_FALSE(partial.complete);
  const Allocation full = allocation_from_json(parse(R"({"0": ["c", "b"], "1": ["a"]})"), li);
  EXPECT_TRUE(full.complete);
  EXPECT_EQ(allocation_json(full, li.names), parse(R"({"0": ["c", "b"], "1": ["a"]})"));
  EXPECT_THROW(allocation_from_json(parse(R"({"0": ["q"]})"), li), ValidationError);
  EXPECT_THROW(allocation_from_json(parse(R"({"0": ["a"], "1": ["a"]})"), li), ContractError);
  EXPECT_THROW(allocation_from_json(parse(R"({"2": ["a"]})"), li), ValidationError);
}

TEST(Io, MissingAndMalformedFiles) {
  EXPECT_THROW(read_json_file(data_path("does-not-exist.json")), ValidationError);
  const std::string bad = ::testing::TempDir() + "/bad.json";
  std::ofstream(bad) << "{ not json";
  EXPECT_THROW(read_json_file(bad), ValidationError);
}

TEST(Bench, RowsAreSortedAndThreadCountIndependent) {
  const auto one = run_random_suite(12, 77, 1);
  const auto many = run_random_suite(12, 77, 4);
  ASSERT_EQ(one.size(), 12u);
  ASSERT_EQ(many.size(), 12u);
  for (std::size_t k = 0; k < 12; ++k) {
    EXPECT_EQ(one[k].index, k);
    EXPECT_EQ(many[k].index, k);
    EXPECT_EQ(one[k].score, many[k].score);
    EXPECT_TRUE(one[k].pass) << one[k].error;
  }
}
