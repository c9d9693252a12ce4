#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/value.hpp"

namespace mmsfair {

/// Stable opaque good identifier. Real and dummy goods live in disjoint id
/// spaces (dummy ids carry the high bit), so a transform can mint either kind
/// without consulting the other.
class GoodId {
 public:
  static constexpr std::uint32_t kDummyBit = 0x8000'0000u;

  constexpr GoodId() = default;
  constexpr explicit GoodId(std::uint32_t raw) : raw_(raw) {}

  static constexpr GoodId real(std::uint32_t index) { return GoodId(index & ~kDummyBit); }
  static constexpr GoodId dummy(std::uint32_t index) { return GoodId(index | kDummyBit); }

  constexpr bool is_dummy() const { return (raw_ & kDummyBit) != 0; }
  constexpr std::uint32_t index() const { return raw_ & ~kDummyBit; }
  constexpr std::uint32_t raw() const { return raw_; }

  friend constexpr auto operator<=>(GoodId, GoodId) = default;

 private:
  std::uint32_t raw_ = 0;
};

inline std::string to_string(GoodId id);

using AgentIndex = std::size_t;
using Bundle = std::vector<GoodId>;

/// Additive fair-division instance (N, M, v, D). Rows of `valuation` are
/// indexed by agent; columns follow `goods` then `dummies`.
///
/// For ordered instances `goods` is listed in rank order: goods[0] is rank 1.
struct Instance {
  std::vector<GoodId> goods;
  std::vector<GoodId> dummies;
  std::vector<std::vector<Value>> valuation;

  std::size_t agents() const { return valuation.size(); }
  std::size_t columns() const { return goods.size() + dummies.size(); }

  /// Column of `id` in a valuation row, or nullopt.
  std::optional<std::size_t> column(GoodId id) const {
    if (id.is_dummy()) {
      auto it = std::find(dummies.begin(), dummies.end(), id);
      if (it == dummies.end()) return std::nullopt;
      return goods.size() + static_cast<std::size_t>(it - dummies.begin());
    }
    auto it = std::find(goods.begin(), goods.end(), id);
    if (it == goods.end()) return std::nullopt;
    return static_cast<std::size_t>(it - goods.begin());
  }

  const Value& value(AgentIndex agent, GoodId id) const {
    if (agent >= agents()) throw InvalidReference("agent " + std::to_string(agent) + " out of range");
    auto col = column(id);
    if (!col) throw InvalidReference("unknown good " + to_string(id));
    return valuation[agent][*col];
  }

  /// Real-good values of one agent, in `goods` order.
  std::span<const Value> real_row(AgentIndex agent) const {
    return std::span<const Value>(valuation.at(agent)).first(goods.size());
  }

  std::vector<GoodId> all_goods() const {
    std::vector<GoodId> all = goods;
    all.insert(all.end(), dummies.begin(), dummies.end());
    return all;
  }

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Per-agent disjoint bundles of real goods.
struct Allocation {
  std::vector<Bundle> bundles;
  bool complete = false;

  std::size_t agents() const { return bundles.size(); }

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

inline std::string to_string(GoodId id) {
  return (id.is_dummy() ? "dummy#" : "good#") + std::to_string(id.index());
}

/// v_i(S): exact sum of the agent's values over the bundle.
inline Value bundle_value(const Instance& instance, AgentIndex agent, std::span<const GoodId> bundle) {
  Value sum;
  for (GoodId g : bundle) sum += instance.value(agent, g);
  return sum;
}

/// Throws ValidationError naming the first broken invariant.
inline void validate_instance(const Instance& instance) {
  std::set<GoodId> seen;
  for (GoodId g : instance.goods) {
    if (g.is_dummy()) throw ValidationError("goods", to_string(g) + " is a dummy id listed as a real good");
    if (!seen.insert(g).second) throw ValidationError("goods", "duplicate good id " + to_string(g));
  }
  for (GoodId g : instance.dummies) {
    if (!g.is_dummy()) throw ValidationError("dummies", to_string(g) + " is a real id listed as a dummy");
    if (!seen.insert(g).second) throw ValidationError("dummies", "duplicate good id " + to_string(g));
  }
  for (std::size_t i = 0; i < instance.agents(); ++i) {
    const auto& row = instance.valuation[i];
    if (row.size() != instance.columns()) {
      throw ValidationError("valuations[" + std::to_string(i) + "]",
                            "row has " + std::to_string(row.size()) + " entries, expected " +
                                std::to_string(instance.columns()));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].sign() < 0) {
        throw ValidationError("valuations[" + std::to_string(i) + "]",
                              "negative value " + row[c].str() + " for " +
                                  to_string(c < instance.goods.size() ? instance.goods[c]
                                                                      : instance.dummies[c - instance.goods.size()]));
      }
    }
  }
}

/// Checks an allocation against an instance: one bundle per agent, bundles of
/// known real goods, pairwise disjoint; if `complete`, they cover every real good.
inline void validate_allocation(const Instance& instance, const Allocation& alloc) {
  if (alloc.agents() != instance.agents()) {
    throw ContractError("allocation has " + std::to_string(alloc.agents()) + " bundles for " +
                        std::to_string(instance.agents()) + " agents");
  }
  std::set<GoodId> seen;
  for (const auto& bundle : alloc.bundles) {
    for (GoodId g : bundle) {
      if (g.is_dummy()) throw ContractError("allocation hands out " + to_string(g));
      if (!instance.column(g)) throw InvalidReference("allocation references unknown " + to_string(g));
      if (!seen.insert(g).second) throw ContractError(to_string(g) + " allocated twice");
    }
  }
  if (alloc.complete && seen.size() != instance.goods.size()) {
    throw ContractError("allocation marked complete but leaves " +
                        std::to_string(instance.goods.size() - seen.size()) + " goods unallocated");
  }
}

/// Real goods not held by any bundle, in `goods` order.
inline std::vector<GoodId> unallocated_goods(const Instance& instance, const Allocation& alloc) {
  std::set<GoodId> held;
  for (const auto& b : alloc.bundles) held.insert(b.begin(), b.end());
  std::vector<GoodId> out;
  for (GoodId g : instance.goods) {
    if (!held.contains(g)) out.push_back(g);
  }
  return out;
}

/// Sequential real ids 0..m-1.
inline std::vector<GoodId> real_goods(std::size_t m) {
  std::vector<GoodId> ids;
  ids.reserve(m);
  for (std::size_t j = 0; j < m; ++j) ids.push_back(GoodId::real(static_cast<std::uint32_t>(j)));
  return ids;
}

/// Builds and validates a dummy-free instance from a dense table.
inline Instance make_instance(std::vector<std::vector<Value>> rows) {
  Instance inst;
  inst.goods = real_goods(rows.empty() ? 0 : rows.front().size());
  inst.valuation = std::move(rows);
  validate_instance(inst);
  return inst;
}

}  // namespace mmsfair
