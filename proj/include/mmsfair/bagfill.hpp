#pragma once

// Bag filling on ordered instances. Bag k starts as ranks {k, 2n+1-k}; bags
// grow one good at a time and are handed out as soon as some unsatisfied agent
// values one at alpha or more. Dummy goods are ignored.

#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/model.hpp"

namespace mmsfair {

struct BagEvent {
  enum class Kind { Fill, Assign };
  Kind kind = Kind::Fill;
  std::size_t bag = 0;
  std::optional<GoodId> good;  // the good added (fill only)
  // Assign: the recipient and their value for the bag. Fill: the unsatisfied
  // agent who values the grown bag most, and that value.
  AgentIndex agent = 0;
  Value bag_value;
};

struct BagFillResult {
  std::optional<Allocation> allocation;  // partial; nullopt when goods ran out
  std::vector<Bundle> bags;              // final bag contents
  std::vector<BagEvent> trace;
};

/// Scan order is agents ascending then bags ascending; when nobody is
/// satisfied the next unassigned good in rank order joins the lowest-indexed
/// unassigned bag.
inline BagFillResult bag_fill(const Instance& instance, const Value& alpha) {
  const std::size_t n = instance.agents();
  const std::size_t m = instance.goods.size();
  if (m < 2 * n) {
    throw ContractError("bag_fill needs at least 2n goods, got " + std::to_string(m) + " for " + std::to_string(n) +
                        " agents");
  }

  BagFillResult out;
  out.bags.resize(n);
  // Bag value per agent, maintained incrementally.
  std::vector<std::vector<Value>> worth(n, std::vector<Value>(n));
  auto add = [&](std::size_t bag, std::size_t col) {
    out.bags[bag].push_back(instance.goods[col]);
    for (AgentIndex i = 0; i < n; ++i) worth[i][bag] += instance.valuation[i][col];
  };
  for (std::size_t k = 0; k < n; ++k) {
    add(k, k);
    add(k, 2 * n - 1 - k);
  }

  std::deque<std::size_t> pool;  // unassigned goods (columns)
  for (std::size_t c = 2 * n; c < m; ++c) pool.push_back(c);
  std::set<AgentIndex> agents_left;
  std::set<std::size_t> bags_left;
  for (std::size_t k = 0; k < n; ++k) {
    agents_left.insert(k);
    bags_left.insert(k);
  }

  Allocation alloc;
  alloc.bundles.resize(n);
  while (!agents_left.empty()) {
    std::optional<std::pair<AgentIndex, std::size_t>> hit;
    for (AgentIndex i : agents_left) {
      for (std::size_t k : bags_left) {
        if (worth[i][k] >= alpha) {
          hit = std::make_pair(i, k);
          break;
        }
      }
      if (hit) break;
    }
    if (hit) {
      auto [i, k] = *hit;
      alloc.bundles[i] = out.bags[k];
      agents_left.erase(i);
      bags_left.erase(k);
      out.trace.push_back({BagEvent::Kind::Assign, k, std::nullopt, i, worth[i][k]});
      continue;
    }
    if (pool.empty()) {
      out.allocation = std::nullopt;
      return out;
    }
    const std::size_t col = pool.front();
    pool.pop_front();
    const std::size_t k = *bags_left.begin();
    add(k, col);
    AgentIndex top = *agents_left.begin();
    for (AgentIndex i : agents_left) {
      if (worth[i][k] > worth[top][k]) top = i;
    }
    out.trace.push_back({BagEvent::Kind::Fill, k, instance.goods[col], top, worth[top][k]});
  }
  alloc.complete = pool.empty();
  out.allocation = std::move(alloc);
  return out;
}

/// Hands every unallocated real good to the agent valuing it most (ties to
/// the lowest agent). No agent's bundle value decreases.
inline Allocation complete_allocation(const Instance& instance, const Allocation& partial) {
  if (partial.agents() != instance.agents()) throw ContractError("partial allocation has the wrong agent count");
  validate_allocation(instance, Allocation{partial.bundles, false});
  Allocation out{partial.bundles, true};
  if (instance.agents() == 0) {
    if (!instance.goods.empty()) throw ContractError("cannot allocate goods without agents");
    return out;
  }
  for (GoodId g : unallocated_goods(instance, partial)) {
    const std::size_t col = *instance.column(g);
    AgentIndex best = 0;
    for (AgentIndex i = 1; i < instance.agents(); ++i) {
      if (instance.valuation[i][col] > instance.valuation[best][col]) best = i;
    }
    out.bundles[best].push_back(g);
  }
  return out;
}

}  // namespace mmsfair
