#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/model.hpp"

namespace mmsfair {

/// For each agent, rank (0-based) -> original good id. Dummy goods are not ranked.
struct OrderingMap {
  std::vector<std::vector<GoodId>> rank_to_good;
  std::size_t goods = 0;
};

struct OrderedInstance {
  Instance instance;
  OrderingMap map;
};

/// True when every agent's real-good values are non-increasing in `goods` order.
inline bool is_ordered(const Instance& instance) {
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    const auto row = instance.real_row(i);
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j - 1] < row[j]) return false;
    }
  }
  return true;
}

/// Sorts each agent's real-good values into non-increasing order. The ordered
/// instance has real ids 0..m-1 (id j is rank j+1); dummies pass through.
/// Ties are broken by ascending original good id.
inline OrderedInstance to_ordered(const Instance& instance) {
  validate_instance(instance);
  const std::size_t m = instance.goods.size();
  OrderedInstance out;
  out.instance.goods = real_goods(m);
  out.instance.dummies = instance.dummies;
  out.map.goods = m;
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    const auto& row = instance.valuation[i];
    std::vector<std::size_t> cols(m);
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    std::sort(cols.begin(), cols.end(), [&](std::size_t a, std::size_t b) {
      if (row[a] != row[b]) return row[b] < row[a];
      return instance.goods[a] < instance.goods[b];
    });
    std::vector<Value> sorted;
    sorted.reserve(instance.columns());
    std::vector<GoodId> perm;
    perm.reserve(m);
    for (std::size_t c : cols) {
      sorted.push_back(row[c]);
      perm.push_back(instance.goods[c]);
    }
    sorted.insert(sorted.end(), row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
    out.instance.valuation.push_back(std::move(sorted));
    out.map.rank_to_good.push_back(std::move(perm));
  }
  return out;
}

/// Picking-sequence lift. Ranks are visited in increasing order; the owner of
/// rank t in `ordered_alloc` takes their most valued remaining original good
/// (ties to the smaller id). Every agent ends with at least the value their
/// ordered bundle had in the ordered instance.
inline Allocation lift_ordered(const OrderingMap& map, const Instance& original, const Allocation& ordered_alloc) {
  const std::size_t m = map.goods;
  if (original.goods.size() != m) throw ContractError("ordering map does not match the original instance");
  if (ordered_alloc.agents() != original.agents()) throw ContractError("ordered allocation has the wrong agent count");

  std::vector<std::optional<AgentIndex>> owner(m);
  for (AgentIndex a = 0; a < ordered_alloc.agents(); ++a) {
    for (GoodId g : ordered_alloc.bundles[a]) {
      if (g.is_dummy() || g.index() >= m) throw ContractError("ordered allocation holds " + to_string(g));
      if (owner[g.index()]) throw ContractError(to_string(g) + " allocated twice in ordered allocation");
      owner[g.index()] = a;
    }
  }
  for (std::size_t t = 0; t < m; ++t) {
    if (!owner[t]) throw ContractError("ordered allocation is incomplete: rank " + std::to_string(t + 1) + " unowned");
  }

  std::vector<bool> taken(m, false);
  Allocation out;
  out.bundles.assign(original.agents(), {});
  for (std::size_t t = 0; t < m; ++t) {
    const AgentIndex a = *owner[t];
    const auto& row = original.valuation[a];
    std::optional<std::size_t> pick;
    for (std::size_t c = 0; c < m; ++c) {
      if (taken[c]) continue;
      if (!pick || row[*pick] < row[c] || (row[*pick] == row[c] && original.goods[c] < original.goods[*pick])) {
        pick = c;
      }
    }
    taken[*pick] = true;
    out.bundles[a].push_back(original.goods[*pick]);
  }
  out.complete = true;
  return out;
}

}  // namespace mmsfair
