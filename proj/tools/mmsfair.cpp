// mmsfair: command-line front end for the approximate-MMS solver.
//
// Exit codes: 0 success, 1 verification verdict "fail" or unexpected error,
// 2 validation error, 3 capacity error, 4 internal-invariant violation.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmsfair/mmsfair.hpp"

namespace {

using namespace mmsfair;
using mmsfair::harness::LabeledInstance;

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ValidationError("output", "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

LabeledInstance load_instance(const std::string& path) {
  return harness::instance_from_json(harness::read_json_file(path));
}

struct Limits {
  std::size_t max_goods = MmsLimits{}.max_goods;
  std::size_t max_parts = MmsLimits{}.max_parts;
  MmsLimits get() const { return {max_goods, max_parts}; }
};

void add_limits(CLI::App* cmd, Limits& limits) {
  cmd->add_option("--max-goods", limits.max_goods, "Largest good count the exact MMS search accepts");
  cmd->add_option("--max-parts", limits.max_parts, "Largest part count the exact MMS search accepts");
}

int run_solve(const std::string& input, const std::string& alpha_text, const std::string& trace_path,
              const std::string& output, const Limits& limits) {
  const LabeledInstance li = load_instance(input);
  const AlphaChoice choice = alpha_for(li.instance.agents(), parse_alpha_mode(alpha_text));
  MmsOracle oracle(limits.get());
  const SolveReport report = approx_mms(li.instance, choice, oracle);
  if (!trace_path.empty()) {
    json trace = mmsfair::detail::stages_json(report.stages);
    std::ofstream out(trace_path);
    if (!out) throw ValidationError("trace", "cannot write '" + trace_path + "'");
    out << trace.dump(2) << "\n";
  }
  emit(harness::report_json(report, li.names), output);
  return 0;
}

int run_mms(const std::string& input, std::optional<std::size_t> agent, const Limits& limits) {
  const LabeledInstance li = load_instance(input);
  MmsOracle oracle(limits.get());
  json out = json::array();
  for (AgentIndex i = 0; i < li.instance.agents(); ++i) {
    if (agent && *agent != i) continue;
    const MmsResult r = oracle.agent_mms(li.instance, i);
    json row;
    row["agent"] = i;
    row["mms"] = to_json(r.value);
    json cells = json::array();
    for (const auto& cell : r.partition) cells.push_back(bundle_json(cell, li.names));
    row["partition"] = std::move(cells);
    out.push_back(std::move(row));
  }
  if (agent && out.empty()) throw InvalidReference("agent " + std::to_string(*agent) + " out of range");
  emit(out, "");
  return 0;
}

int run_verify(const std::string& input, const std::string& alloc_path, const std::string& alpha_text,
               const Limits& limits) {
  const LabeledInstance li = load_instance(input);
  // Accepts a bare allocation or a full solve report.
  json doc = harness::read_json_file(alloc_path);
  if (doc.is_object() && doc.contains("allocation") && doc.contains("score")) doc = doc["allocation"];
  const Allocation alloc = harness::allocation_from_json(doc, li);
  if (!alloc.complete) throw ValidationError("allocation", "allocation leaves goods unallocated");
  MmsOracle oracle(limits.get());
  const auto report = harness::verify(li.instance, alloc, Value::parse(alpha_text), oracle);
  emit(harness::verify_json(report), "");
  return report.pass ? 0 : 1;
}

int run_bench(const std::string& suite, std::uint64_t count, std::uint64_t seed, unsigned threads) {
  if (suite != "random") throw ValidationError("suite", "only the 'random' suite exists");
  const auto start = std::chrono::steady_clock::now();
  const auto rows = harness::run_random_suite(count, seed, threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json out;
  json failures = json::array();
  std::optional<Value> worst_margin;
  std::size_t passed = 0;
  for (const auto& r : rows) {
    if (r.error.empty() && r.pass) {
      ++passed;
      const Value margin = r.score - r.alpha;
      worst_margin = worst_margin ? min(*worst_margin, margin) : margin;
    } else {
      json f;
      f["index"] = r.index;
      f["n"] = r.n;
      f["m"] = r.m;
      f["error"] = r.error;
      if (r.error.empty()) f["score"] = to_json(r.score);
      failures.push_back(std::move(f));
    }
  }
  out["suite"] = suite;
  out["count"] = count;
  out["seed"] = seed;
  out["passed"] = passed;
  out["failures"] = std::move(failures);
  out["min_score_minus_alpha"] = worst_margin ? json(to_json(*worst_margin)) : json(nullptr);
  out["seconds"] = secs;
  emit(out, "");
  return passed == rows.size() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact approximate-maximin-share allocation of indivisible goods"};
  app.require_subcommand(1);

  Limits limits;
  std::string input, alpha_text = "improved", trace_path, output, alloc_path;

  auto* solve = app.add_subcommand("solve", "Compute an allocation meeting alpha times every agent's MMS");
  solve->add_option("--input", input, "Instance JSON")->required();
  solve->add_option("--alpha", alpha_text, "classic | improved | P/Q")->capture_default_str();
  solve->add_option("--trace", trace_path, "Write reduction and bag-filling trace JSON here");
  solve->add_option("--output", output, "Write the report here instead of stdout");
  add_limits(solve, limits);

  std::optional<std::size_t> agent;
  auto* mms_cmd = app.add_subcommand("mms", "Exact MMS value and partition per agent");
  mms_cmd->add_option("--input", input, "Instance JSON")->required();
  mms_cmd->add_option("--agent", agent, "Only this agent");
  add_limits(mms_cmd, limits);

  std::string verify_alpha;
  auto* verify_cmd = app.add_subcommand("verify", "Score an allocation against exact MMS values");
  verify_cmd->add_option("--input", input, "Instance JSON")->required();
  verify_cmd->add_option("--allocation", alloc_path, "Allocation JSON")->required();
  verify_cmd->add_option("--alpha", verify_alpha, "Threshold P/Q")->required();
  add_limits(verify_cmd, limits);

  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  std::size_t gen_n = 0, gen_m = 0;
  long gen_bound = 100;
  std::uint64_t gen_seed = 0;
  std::string gen_kind = "int";
  auto* tight = gen->add_subcommand("tight", "Identical-valuation instance with 3n-1 goods");
  tight->add_option("--n", gen_n, "Agents (>= 2)")->required();
  tight->add_option("--output", output, "Write here instead of stdout");
  auto* random = gen->add_subcommand("random", "Seeded uniform random instance");
  random->add_option("--n", gen_n, "Agents")->required();
  random->add_option("--m", gen_m, "Goods")->required();
  random->add_option("--bound", gen_bound, "Largest numerator")->required();
  random->add_option("--seed", gen_seed, "PRNG seed")->required();
  random->add_option("--kind", gen_kind, "int | rational")->check(CLI::IsMember({"int", "rational"}));
  random->add_option("--output", output, "Write here instead of stdout");

  std::string suite = "random";
  std::uint64_t bench_count = 100, bench_seed = 0;
  unsigned threads = 0;
  auto* bench = app.add_subcommand("bench", "Solve and verify a seeded batch of random instances");
  bench->add_option("--suite", suite, "Suite name")->capture_default_str();
  bench->add_option("--count", bench_count, "Instances")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Suite seed")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(input, alpha_text, trace_path, output, limits);
    if (*mms_cmd) return run_mms(input, agent, limits);
    if (*verify_cmd) return run_verify(input, alloc_path, verify_alpha, limits);
    if (*tight) {
      const auto ex = harness::gen_tight_example(gen_n);
      emit(instance_json(ex.instance), output);
      return 0;
    }
    if (*random) {
      harness::GeneratorSpec spec;
      spec.kind = gen_kind == "int" ? harness::GeneratorKind::UniformInt : harness::GeneratorKind::UniformRational;
      spec.n = gen_n;
      spec.m = gen_m;
      spec.value_bound = gen_bound;
      spec.seed = gen_seed;
      emit(instance_json(harness::gen_random(spec)), output);
      return 0;
    }
    if (*bench) return run_bench(suite, bench_count, bench_seed, threads);
  } catch (const InternalInvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << "\n" << e.trace() << "\n";
    return 4;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const InvalidReference& e) {
    std::cerr << "invalid reference: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
