#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "mmsfair/harness/generators.hpp"
#include "mmsfair/harness/verify.hpp"
#include "mmsfair/pipeline.hpp"

namespace mmsfair::harness {

struct BenchRow {
  std::uint64_t index = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  Value alpha;
  Value score;
  bool pass = false;
  std::string error;  // empty on success
};

/// Solves and verifies `count` suite instances on `threads` workers. Rows come
/// back sorted by instance index regardless of completion order.
inline std::vector<BenchRow> run_random_suite(std::uint64_t count, std::uint64_t seed, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<BenchRow> rows;
  std::mutex mu;
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t k = next++; k < count; k = next++) {
      const auto spec = random_suite_spec(seed, k);
      BenchRow row;
      row.index = k;
      row.n = spec.n;
      row.m = spec.m;
      try {
        const Instance inst = gen_random(spec);
        const AlphaChoice choice = alpha_for(inst.agents(), ImprovedAlpha{});
        row.alpha = choice.alpha;
        MmsOracle solver_oracle;
        const SolveReport report = approx_mms(inst, choice, solver_oracle);
        MmsOracle check_oracle;
        const VerifyReport v = verify(inst, report.allocation, choice.alpha, check_oracle);
        row.score = v.score;
        row.pass = v.pass;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      std::lock_guard lock(mu);
      rows.push_back(std::move(row));
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) { return a.index < b.index; });
  return rows;
}

}  // namespace mmsfair::harness
