#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/model.hpp"

namespace mmsfair::harness {

struct TightExample {
  Instance instance;
  // Partition with every cell worth exactly 1 to every agent.
  std::vector<Bundle> certificate;
};

/// n agents, 3n-1 goods, one shared valuation: good j (1-based) is worth
/// (2n-1-floor((j-1)/2))/(4n-2) for j <= 2n and n/(4n-2) beyond. Good j has
/// id j-1. Certificate: {1,2} and {i+2, 2n+1-i, 2n+i} for i = 1..n-1.
inline TightExample gen_tight_example(std::size_t n) {
  if (n < 2) throw ContractError("tight example needs n >= 2");
  const long nn = static_cast<long>(n);
  const std::size_t m = 3 * n - 1;
  const long den = 4 * nn - 2;
  std::vector<Value> row;
  row.reserve(m);
  for (long j = 1; j <= static_cast<long>(m); ++j) {
    row.push_back(j <= 2 * nn ? Value(2 * nn - 1 - (j - 1) / 2, den) : Value(nn, den));
  }
  TightExample ex;
  ex.instance = make_instance(std::vector<std::vector<Value>>(n, row));
  auto good = [](long j) { return GoodId::real(static_cast<std::uint32_t>(j - 1)); };
  ex.certificate.push_back({good(1), good(2)});
  for (long i = 1; i <= nn - 1; ++i) ex.certificate.push_back({good(i + 2), good(2 * nn + 1 - i), good(2 * nn + i)});
  return ex;
}

enum class GeneratorKind { Tight, UniformInt, UniformRational };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::UniformInt;
  std::size_t n = 2;
  std::size_t m = 4;
  long value_bound = 100;
  std::uint64_t seed = 0;
};

namespace detail {

// Deterministic across standard libraries: mt19937_64 output is fully
// specified, and we reduce it ourselves instead of using a distribution.
inline long draw(std::mt19937_64& rng, long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

}  // namespace detail

inline Instance gen_random(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::Tight) return gen_tight_example(spec.n).instance;
  if (spec.value_bound < 0) throw ValidationError("bound", "value bound must be non-negative");
  std::mt19937_64 rng(spec.seed);
  std::vector<std::vector<Value>> rows(spec.n, std::vector<Value>(spec.m));
  for (auto& row : rows) {
    for (auto& v : row) {
      if (spec.kind == GeneratorKind::UniformInt) {
        v = Value(detail::draw(rng, 0, spec.value_bound));
      } else {
        const long p = detail::draw(rng, 0, spec.value_bound);
        const long q = detail::draw(rng, 1, std::max(1L, spec.value_bound));
        v = Value(p, q);
      }
    }
  }
  Instance inst;
  inst.goods = real_goods(spec.m);
  inst.valuation = std::move(rows);
  validate_instance(inst);
  return inst;
}

/// Instance `index` of the seeded random suite: n in {2,3,4}, m in [n, 12],
/// integer values in [0, 100].
inline GeneratorSpec random_suite_spec(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  GeneratorSpec spec;
  spec.kind = GeneratorKind::UniformInt;
  spec.n = static_cast<std::size_t>(detail::draw(rng, 2, 4));
  spec.m = static_cast<std::size_t>(detail::draw(rng, static_cast<long>(spec.n), 12));
  spec.value_bound = 100;
  spec.seed = rng();
  return spec;
}

}  // namespace mmsfair::harness
