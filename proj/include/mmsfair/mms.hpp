#pragma once

// Exact maximin-share computation.
//
// MMS^p_u(S) = max over partitions of S into p cells of the minimum cell value.
// The search here is exact and refuses (CapacityError) rather than approximate
// when an input exceeds its configured size.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <type_traits>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mmsfair/errors.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/value.hpp"

namespace mmsfair {

struct MmsLimits {
  std::size_t max_goods = 20;
  std::size_t max_parts = 8;
};

struct MmsResult {
  Value value;
  std::vector<Bundle> partition;
};

/// Partition over positions 0..m-1 of a value list.
struct IndexPartition {
  Value value;
  std::vector<std::vector<std::size_t>> cells;
};

using Valuation = std::map<GoodId, Value>;

namespace detail {

// Max-min search over a multiset of integer values, grouped into classes of
// equal value sorted descending. A search state is the vector of remaining
// counts per class, encoded in mixed radix; with all values distinct this is
// exactly a remaining-goods bitmask.
//
// best(state, c) is computed exactly: branch on the cell holding the first
// remaining good, seeded with a greedy lower bound, skipping any cell whose
// value or whose complement's average cannot beat the bound.
template <class Int>
class MaximinSearch {
 public:
  MaximinSearch(std::vector<Int> class_values, std::vector<std::uint32_t> class_counts)
      : values_(std::move(class_values)), counts_(std::move(class_counts)), stride_(values_.size()) {
    std::uint64_t s = 1;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      stride_[i] = s;
      s *= counts_[i] + 1;
    }
  }

  struct Solution {
    Int value;
    // Per cell, count taken from each class.
    std::vector<std::vector<std::uint32_t>> cells;
  };

  Solution solve(std::size_t parts) {
    std::vector<std::uint32_t> state = counts_;
    Solution sol;
    sol.value = best(state, parts);
    for (std::size_t c = parts; c >= 1; --c) {
      if (c == 1) {
        sol.cells.push_back(state);
        break;
      }
      best(state, c);
      const auto& cell = memo_.at(key(state, c)).choice;
      sol.cells.push_back(cell);
      for (std::size_t i = 0; i < state.size(); ++i) state[i] -= cell[i];
    }
    return sol;
  }

 private:
  struct Entry {
    Int value;
    std::vector<std::uint32_t> choice;
  };

  std::uint64_t key(const std::vector<std::uint32_t>& state, std::size_t cells) const {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < state.size(); ++i) k += state[i] * stride_[i];
    return k * 64 + cells;
  }

  Int best(const std::vector<std::uint32_t>& state, std::size_t cells) {
    Int total = 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      total += values_[i] * Int(state[i]);
      count += state[i];
    }
    if (cells == 1) return total;

    const std::uint64_t k = key(state, cells);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second.value;

    Entry entry;
    entry.choice.assign(state.size(), 0);
    const std::size_t first = first_class(state);

    if (count < cells) {
      // Some cell must stay empty.
      entry.value = 0;
      if (first < state.size()) entry.choice[first] = 1;
      return memo_.emplace(k, std::move(entry)).first->second.value;
    }

    greedy(state, cells, entry);
    if (!optimal(entry.value, total, cells)) {
      Branch br{*this, state, cells, total, entry};
      br.suffix.assign(state.size() + 1, 0);
      for (std::size_t i = state.size(); i-- > 0;) br.suffix[i] = br.suffix[i + 1] + values_[i] * Int(state[i]);
      br.taken.assign(state.size(), 0);
      br.rest = state;
      br.run(first, Int(0), first);
    }
    return memo_.emplace(k, std::move(entry)).first->second.value;
  }

  static bool optimal(const Int& lower, const Int& total, std::size_t cells) {
    // An integral optimum never exceeds floor(total / cells).
    return (lower + 1) * Int(cells) > total;
  }

  std::size_t first_class(const std::vector<std::uint32_t>& state) const {
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] > 0) return i;
    }
    return state.size();
  }

  // Longest-processing-time greedy: each good, largest first, joins the
  // currently lightest cell. Cell 0 always receives the first good.
  void greedy(const std::vector<std::uint32_t>& state, std::size_t cells, Entry& entry) const {
    std::vector<Int> sums(cells, Int(0));
    std::vector<std::uint32_t> cell0(state.size(), 0);
    for (std::size_t i = 0; i < state.size(); ++i) {
      for (std::uint32_t t = 0; t < state[i]; ++t) {
        std::size_t lightest = 0;
        for (std::size_t c = 1; c < cells; ++c) {
          if (sums[c] < sums[lightest]) lightest = c;
        }
        sums[lightest] += values_[i];
        if (lightest == 0) ++cell0[i];
      }
    }
    entry.value = *std::min_element(sums.begin(), sums.end());
    entry.choice = std::move(cell0);
  }

  struct Branch {
    MaximinSearch& search;
    const std::vector<std::uint32_t>& state;
    std::size_t cells;
    Int total;
    Entry& entry;
    std::vector<Int> suffix;
    std::vector<std::uint32_t> taken;
    std::vector<std::uint32_t> rest;
    bool done = false;

    void run(std::size_t i, Int sum, std::size_t first) {
      if (done) return;
      const Int need = entry.value + 1;
      // Cell value must reach `need`; the other cells must average at least `need`.
      const Int cap = total - need * Int(cells - 1);
      if (sum > cap) return;
      if (sum + suffix[i] < need) return;
      if (i == state.size()) {
        const Int sub = search.best(rest, cells - 1);
        const Int val = sub < sum ? sub : sum;
        if (val > entry.value) {
          entry.value = val;
          entry.choice = taken;
          if (optimal(entry.value, total, cells)) done = true;
        }
        return;
      }
      const std::uint32_t lo = (i == first) ? 1 : 0;
      for (std::uint32_t t = state[i] + 1; t-- > lo;) {
        const Int next = sum + search.values_[i] * Int(t);
        if (next > cap) continue;
        taken[i] = t;
        rest[i] = state[i] - t;
        run(i + 1, next, first);
        if (done) break;
      }
      taken[i] = 0;
      rest[i] = state[i];
    }
  };

  std::vector<Int> values_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> stride_;
  std::unordered_map<std::uint64_t, Entry> memo_;
};

template <class Int>
IndexPartition run_search(const std::vector<mpz_class>& scaled, const mpz_class& scale, std::size_t parts,
                          Int (*convert)(const mpz_class&)) {
  const std::size_t m = scaled.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scaled[a] > scaled[b]; });

  std::vector<Int> class_values;
  std::vector<std::uint32_t> class_counts;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t idx : order) {
    if (class_values.empty() || scaled[members.back().front()] != scaled[idx]) {
      class_values.push_back(convert(scaled[idx]));
      class_counts.push_back(0);
      members.emplace_back();
    }
    ++class_counts.back();
    members.back().push_back(idx);
  }

  MaximinSearch<Int> search(std::move(class_values), std::move(class_counts));
  auto sol = search.solve(parts);

  IndexPartition out;
  mpz_class best;
  if constexpr (std::is_same_v<Int, mpz_class>) {
    best = sol.value;
  } else {
    best = static_cast<long>(sol.value);
  }
  out.value = Value::from_integers(best, scale);
  std::vector<std::size_t> next(members.size(), 0);
  for (const auto& cell_counts : sol.cells) {
    std::vector<std::size_t> cell;
    for (std::size_t c = 0; c < cell_counts.size(); ++c) {
      for (std::uint32_t t = 0; t < cell_counts[c]; ++t) cell.push_back(members[c][next[c]++]);
    }
    std::sort(cell.begin(), cell.end());
    out.cells.push_back(std::move(cell));
  }
  while (out.cells.size() < parts) out.cells.emplace_back();
  return out;
}

inline std::int64_t mpz_to_i64(const mpz_class& z) { return z.get_si(); }
inline mpz_class mpz_identity(const mpz_class& z) { return z; }

inline void check_limits(std::size_t goods, std::size_t parts, const MmsLimits& limits, const char* who) {
  if (parts == 0) throw ContractError(std::string(who) + ": parts must be at least 1");
  if (goods > limits.max_goods || parts > limits.max_parts || goods > 56) {
    throw CapacityError(std::string(who) + ": " + std::to_string(goods) + " goods into " + std::to_string(parts) +
                        " parts exceeds the configured limit of " + std::to_string(limits.max_goods) + " goods, " +
                        std::to_string(limits.max_parts) + " parts");
  }
}

}  // namespace detail

/// Exact MMS over positions of `values`. Values must be non-negative.
inline IndexPartition maximin_partition(std::span<const Value> values, std::size_t parts, const MmsLimits& limits = {}) {
  detail::check_limits(values.size(), parts, limits, "mms");
  mpz_class scale = 1;
  for (const Value& v : values) {
    if (v.sign() < 0) throw ContractError("mms: negative value " + v.str());
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.denominator().get_mpz_t());
  }
  std::vector<mpz_class> scaled;
  scaled.reserve(values.size());
  mpz_class total = 0;
  for (const Value& v : values) {
    scaled.push_back(v.numerator() * (scale / v.denominator()));
    total += scaled.back();
  }
  // Products of a bound with the cell count must stay inside int64.
  const mpz_class ceiling = mpz_class(std::numeric_limits<std::int64_t>::max() / 4) / mpz_class(static_cast<unsigned long>(parts + 1));
  if (total <= ceiling) return detail::run_search<std::int64_t>(scaled, scale, parts, &detail::mpz_to_i64);
  return detail::run_search<mpz_class>(scaled, scale, parts, &detail::mpz_identity);
}

/// Reference enumerator: every assignment of goods to cells, no pruning, no
/// memo, plain rational arithmetic. Limited to 10 goods and 4 parts.
inline IndexPartition maximin_partition_naive(std::span<const Value> values, std::size_t parts) {
  detail::check_limits(values.size(), parts, MmsLimits{10, 4}, "mms_naive");
  const std::size_t m = values.size();
  std::vector<std::size_t> assign(m, 0);
  std::vector<std::size_t> best_assign;
  std::optional<Value> best;
  std::vector<Value> sums(parts);

  auto visit = [&](auto&& self, std::size_t j) -> void {
    if (j == m) {
      Value low = sums[0];
      for (std::size_t c = 1; c < parts; ++c) low = min(low, sums[c]);
      if (!best || *best < low) {
        best = low;
        best_assign = assign;
      }
      return;
    }
    for (std::size_t c = 0; c < parts; ++c) {
      assign[j] = c;
      sums[c] += values[j];
      self(self, j + 1);
      sums[c] -= values[j];
    }
  };
  visit(visit, 0);

  IndexPartition out;
  out.value = *best;
  out.cells.assign(parts, {});
  for (std::size_t j = 0; j < m; ++j) out.cells[best_assign[j]].push_back(j);
  return out;
}

namespace detail {

inline MmsResult to_result(const IndexPartition& p, std::span<const GoodId> ids) {
  MmsResult r;
  r.value = p.value;
  for (const auto& cell : p.cells) {
    Bundle b;
    for (std::size_t idx : cell) b.push_back(ids[idx]);
    r.partition.push_back(std::move(b));
  }
  return r;
}

inline std::vector<Value> lookup(const Valuation& valuation, std::span<const GoodId> good_set) {
  std::vector<Value> values;
  values.reserve(good_set.size());
  for (GoodId g : good_set) {
    auto it = valuation.find(g);
    if (it == valuation.end()) throw InvalidReference("no value for " + to_string(g));
    values.push_back(it->second);
  }
  return values;
}

}  // namespace detail

/// MMS of `good_set` under `valuation` into `parts` cells, with a witness.
inline MmsResult mms(const Valuation& valuation, std::size_t parts, std::span<const GoodId> good_set,
                     const MmsLimits& limits = {}) {
  const auto values = detail::lookup(valuation, good_set);
  return detail::to_result(maximin_partition(values, parts, limits), good_set);
}

inline MmsResult mms_naive(const Valuation& valuation, std::size_t parts, std::span<const GoodId> good_set) {
  const auto values = detail::lookup(valuation, good_set);
  return detail::to_result(maximin_partition_naive(values, parts), good_set);
}

/// Agent `agent`'s valuation over goods and dummies as a map.
inline Valuation valuation_of(const Instance& instance, AgentIndex agent) {
  Valuation v;
  const auto all = instance.all_goods();
  for (std::size_t c = 0; c < all.size(); ++c) v.emplace(all[c], instance.valuation.at(agent)[c]);
  return v;
}

/// If `partition` splits goods and dummies into exactly n cells whose minimum
/// attains total/n, that minimum is the agent's MMS and is returned. No search.
inline std::optional<Value> certified_mms(const Instance& instance, AgentIndex agent,
                                          const std::vector<Bundle>& partition) {
  const std::size_t n = instance.agents();
  if (n == 0 || partition.size() != n) return std::nullopt;
  std::set<GoodId> seen;
  std::optional<Value> low;
  for (const auto& cell : partition) {
    for (GoodId g : cell) {
      if (!instance.column(g) || !seen.insert(g).second) return std::nullopt;
    }
    const Value v = bundle_value(instance, agent, cell);
    low = low ? min(*low, v) : v;
  }
  if (seen.size() != instance.columns()) return std::nullopt;
  Value total;
  for (const Value& v : instance.valuation.at(agent)) total += v;
  if (*low * Value(static_cast<unsigned long>(n)) != total) return std::nullopt;
  return low;
}

/// Exact MMS oracle for instances. Agents whose value vectors coincide share
/// one search: results are cached by (values, parts) for the oracle's lifetime.
class MmsOracle {
 public:
  explicit MmsOracle(MmsLimits limits = {}) : limits_(limits) {}

  const MmsLimits& limits() const noexcept { return limits_; }
  std::size_t searches() const noexcept { return searches_; }

  const IndexPartition& partition(std::vector<Value> values, std::size_t parts) {
    auto key = std::make_pair(parts, std::move(values));
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ++searches_;
      auto result = maximin_partition(key.second, parts, limits_);
      it = cache_.emplace(std::move(key), std::move(result)).first;
    }
    return it->second;
  }

  /// MMS over goods and dummies, `parts` defaulting to the agent count.
  MmsResult agent_mms(const Instance& instance, AgentIndex agent, std::optional<std::size_t> parts = std::nullopt) {
    if (agent >= instance.agents()) throw InvalidReference("agent " + std::to_string(agent) + " out of range");
    const auto& p = partition(instance.valuation[agent], parts.value_or(instance.agents()));
    const auto all = instance.all_goods();
    return detail::to_result(p, all);
  }

  std::vector<Value> all_mms(const Instance& instance) {
    std::vector<Value> out;
    out.reserve(instance.agents());
    for (AgentIndex i = 0; i < instance.agents(); ++i) {
      out.push_back(partition(instance.valuation[i], instance.agents()).value);
    }
    return out;
  }

 private:
  MmsLimits limits_;
  std::size_t searches_ = 0;
  std::map<std::pair<std::size_t, std::vector<Value>>, IndexPartition> cache_;
};

/// min over agents of v_i(A_i) / MMS_i; agents with MMS 0 impose nothing.
/// Returns 1 when no agent has positive MMS.
inline Value mms_score(const Instance& instance, const Allocation& alloc, std::span<const Value> mms_values) {
  validate_allocation(instance, alloc);
  if (!alloc.complete) throw ContractError("mms_score needs a complete allocation");
  std::optional<Value> score;
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    if (mms_values[i].is_zero()) continue;
    const Value ratio = bundle_value(instance, i, alloc.bundles[i]) / mms_values[i];
    score = score ? min(*score, ratio) : ratio;
  }
  return score.value_or(Value(1));
}

inline Value mms_score(const Instance& instance, const Allocation& alloc, MmsOracle& oracle) {
  return mms_score(instance, alloc, oracle.all_mms(instance));
}

}  // namespace mmsfair
