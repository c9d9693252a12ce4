#pragma once

// Reduction rules R1..R4 on ordered instances and the reduce loop that applies
// them until none fires. Each application hands a bundle S_k to one agent and
// removes both from the instance; for thresholds above 3/4, R4 additionally
// leaves behind a dummy good so the survivors' shares cannot drop.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/ordering.hpp"

namespace mmsfair {

enum class Rule { R1 = 1, R2 = 2, R3 = 3, R4 = 4 };

inline std::string to_string(Rule r) { return "R" + std::to_string(static_cast<int>(r)); }

inline Rule rule_from_index(int k) {
  if (k < 1 || k > 4) throw ContractError("reduction rule index must be in 1..4, got " + std::to_string(k));
  return static_cast<Rule>(k);
}

/// 3/4 + min(1/36, 3/(16n-4)): the largest threshold for which the rules and
/// bag filling are known to succeed with n agents.
inline Value max_guaranteed_alpha(std::size_t n) {
  if (n == 0) throw ContractError("agent count must be positive");
  const Value a = Value(1, 36);
  const Value b = Value(3) / Value(16 * static_cast<long>(n) - 4);
  return Value(3, 4) + min(a, b);
}

struct DummyGood {
  GoodId id;
  // Indexed by agent of the reduced instance.
  std::vector<Value> values;
};

struct ReductionRecord {
  Rule rule = Rule::R1;
  AgentIndex agent = 0;        // agent id in the instance handed to reduce()
  AgentIndex agent_index = 0;  // position in the instance the rule was applied to
  Bundle removed_goods;
  std::optional<DummyGood> dummy_created;
  std::vector<Value> pre_mms;  // indexed like the instance the rule was applied to
};

struct AppliedReduction {
  Instance instance;
  ReductionRecord record;
};

struct ReductionLog {
  Value alpha;
  Instance initial;
  std::vector<ReductionRecord> records;
  Instance final;
  // Agent ids (of `initial`) of the agents left in `final`, in order.
  std::vector<AgentIndex> survivors;
};

/// S_k over real goods in rank order; empty when there are too few goods.
inline Bundle rule_bundle(const Instance& instance, Rule rule) {
  const std::size_t n = instance.agents();
  const std::size_t m = instance.goods.size();
  auto g = [&](std::size_t rank) { return instance.goods[rank - 1]; };
  switch (rule) {
    case Rule::R1:
      if (m >= 1) return {g(1)};
      break;
    case Rule::R2:
      if (m >= n + 1) return {g(n), g(n + 1)};
      break;
    case Rule::R3:
      if (m >= 2 * n + 1) return {g(2 * n - 1), g(2 * n), g(2 * n + 1)};
      break;
    case Rule::R4:
      if (m >= 2 * n + 1) return {g(1), g(2 * n + 1)};
      break;
  }
  return {};
}

/// Lowest agent with v_i(S_k) >= alpha * MMS_i, or nullopt if the instance is
/// R_k(alpha)-irreducible. An empty S_k never fires.
inline std::optional<AgentIndex> rule_target(const Instance& instance, const Value& alpha, Rule rule,
                                             std::span<const Value> mms_values) {
  if (mms_values.size() != instance.agents()) throw ContractError("one MMS value per agent required");
  if (!is_ordered(instance)) throw ContractError("reduction rules need an ordered instance");
  const Bundle s = rule_bundle(instance, rule);
  if (s.empty()) return std::nullopt;
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    if (bundle_value(instance, i, s) >= alpha * mms_values[i]) return i;
  }
  return std::nullopt;
}

inline std::optional<AgentIndex> rule_target(const Instance& instance, const Value& alpha, int k,
                                             std::span<const Value> mms_values) {
  return rule_target(instance, alpha, rule_from_index(k), mms_values);
}

/// Gives S_k to `agent` and removes both. For R4 with alpha > 3/4 a dummy good
/// worth max(0, v_j(S_4) - MMS_j) to each remaining agent j is appended.
inline AppliedReduction apply_reduction(const Instance& instance, const Value& alpha, Rule rule, AgentIndex agent,
                                        std::span<const Value> mms_values) {
  if (agent >= instance.agents()) throw InvalidReference("agent " + std::to_string(agent) + " out of range");
  if (mms_values.size() != instance.agents()) throw ContractError("one MMS value per agent required");
  if (!is_ordered(instance)) throw ContractError("reduction rules need an ordered instance");
  const Bundle s = rule_bundle(instance, rule);
  if (s.empty()) throw ContractError(to_string(rule) + " has an empty bundle on this instance");
  if (bundle_value(instance, agent, s) < alpha * mms_values[agent]) {
    throw ContractError(to_string(rule) + " does not satisfy agent " + std::to_string(agent));
  }
  if (rule == Rule::R4 && (rule_target(instance, alpha, Rule::R1, mms_values) ||
                           rule_target(instance, alpha, Rule::R3, mms_values))) {
    throw ContractError("R4 applied while R1 or R3 is applicable");
  }

  AppliedReduction out;
  ReductionRecord& rec = out.record;
  rec.rule = rule;
  rec.agent = agent;
  rec.agent_index = agent;
  rec.removed_goods = s;
  rec.pre_mms.assign(mms_values.begin(), mms_values.end());

  const bool make_dummy = rule == Rule::R4 && alpha > Value(3, 4);
  DummyGood dummy;
  if (make_dummy) {
    std::uint32_t next = 0;
    for (GoodId d : instance.dummies) next = std::max(next, d.index() + 1);
    dummy.id = GoodId::dummy(next);
  }

  Instance& reduced = out.instance;
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < instance.goods.size(); ++c) {
    if (std::find(s.begin(), s.end(), instance.goods[c]) == s.end()) {
      keep_cols.push_back(c);
      reduced.goods.push_back(instance.goods[c]);
    }
  }
  for (std::size_t c = instance.goods.size(); c < instance.columns(); ++c) keep_cols.push_back(c);
  reduced.dummies = instance.dummies;
  if (make_dummy) reduced.dummies.push_back(dummy.id);

  for (AgentIndex j = 0; j < instance.agents(); ++j) {
    if (j == agent) continue;
    std::vector<Value> row;
    row.reserve(keep_cols.size() + 1);
    for (std::size_t c : keep_cols) row.push_back(instance.valuation[j][c]);
    if (make_dummy) {
      const Value v = max(Value(0), bundle_value(instance, j, s) - mms_values[j]);
      row.push_back(v);
      dummy.values.push_back(v);
    }
    reduced.valuation.push_back(std::move(row));
  }
  if (make_dummy) rec.dummy_created = std::move(dummy);
  return out;
}

inline AppliedReduction apply_reduction(const Instance& instance, const Value& alpha, int k, AgentIndex agent,
                                        std::span<const Value> mms_values) {
  return apply_reduction(instance, alpha, rule_from_index(k), agent, mms_values);
}

/// Applies R1, R2, R3, R4 (R4 only once R1 and R3 report nothing) with a
/// restart after every application, recomputing exact MMS values each round.
/// Stops when no rule fires or a single agent is left.
inline ReductionLog reduce(const Instance& instance, const Value& alpha, MmsOracle& oracle) {
  validate_instance(instance);
  if (!is_ordered(instance)) throw ContractError("reduce needs an ordered instance");
  if (alpha.sign() <= 0) throw ContractError("alpha must be positive");
  if (instance.agents() > 0 && alpha > max_guaranteed_alpha(instance.agents())) {
    throw ContractError("alpha " + alpha.str() + " exceeds the guaranteed bound for " +
                        std::to_string(instance.agents()) + " agents");
  }

  ReductionLog log;
  log.alpha = alpha;
  log.initial = instance;
  log.survivors.resize(instance.agents());
  std::iota(log.survivors.begin(), log.survivors.end(), AgentIndex{0});

  Instance current = instance;
  while (current.agents() > 1) {
    const std::vector<Value> shares = oracle.all_mms(current);
    std::optional<std::pair<Rule, AgentIndex>> pick;
    for (Rule r : {Rule::R1, Rule::R2, Rule::R3}) {
      if (auto t = rule_target(current, alpha, r, shares)) {
        pick = std::make_pair(r, *t);
        break;
      }
    }
    if (!pick) {
      if (auto t = rule_target(current, alpha, Rule::R4, shares)) pick = std::make_pair(Rule::R4, *t);
    }
    if (!pick) break;

    auto applied = apply_reduction(current, alpha, pick->first, pick->second, shares);
    applied.record.agent = log.survivors[pick->second];
    log.survivors.erase(log.survivors.begin() + static_cast<std::ptrdiff_t>(pick->second));
    log.records.push_back(std::move(applied.record));
    current = std::move(applied.instance);
  }
  log.final = std::move(current);
  return log;
}

/// Rebuilds every intermediate instance from the records: element 0 is the
/// initial instance, element k the one after k reductions.
inline std::vector<Instance> replay(const ReductionLog& log) {
  std::vector<Instance> stages{log.initial};
  for (const auto& rec : log.records) {
    const Instance& cur = stages.back();
    if (rec.agent_index >= cur.agents()) throw ContractError("log record names a missing agent");
    Instance next;
    std::vector<std::size_t> keep_cols;
    for (std::size_t c = 0; c < cur.goods.size(); ++c) {
      if (std::find(rec.removed_goods.begin(), rec.removed_goods.end(), cur.goods[c]) == rec.removed_goods.end()) {
        keep_cols.push_back(c);
        next.goods.push_back(cur.goods[c]);
      }
    }
    if (next.goods.size() + rec.removed_goods.size() != cur.goods.size()) {
      throw ContractError("log record removes goods that are not present");
    }
    for (std::size_t c = cur.goods.size(); c < cur.columns(); ++c) keep_cols.push_back(c);
    next.dummies = cur.dummies;
    if (rec.dummy_created) next.dummies.push_back(rec.dummy_created->id);
    std::size_t out_row = 0;
    for (AgentIndex j = 0; j < cur.agents(); ++j) {
      if (j == rec.agent_index) continue;
      std::vector<Value> row;
      for (std::size_t c : keep_cols) row.push_back(cur.valuation[j][c]);
      if (rec.dummy_created) row.push_back(rec.dummy_created->values.at(out_row));
      next.valuation.push_back(std::move(row));
      ++out_row;
    }
    stages.push_back(std::move(next));
  }
  return stages;
}

/// Reinstates reduced agents, newest first, each holding the goods its rule
/// removed. `sub_alloc` must be a complete allocation of `log.final`.
inline Allocation lift_reductions(const ReductionLog& log, const Allocation& sub_alloc) {
  if (sub_alloc.agents() != log.final.agents()) {
    throw ContractError("sub-allocation has " + std::to_string(sub_alloc.agents()) + " bundles, reduced instance has " +
                        std::to_string(log.final.agents()) + " agents");
  }
  validate_allocation(log.final, sub_alloc);
  if (!sub_alloc.complete) throw ContractError("lift_reductions needs a complete sub-allocation");

  std::vector<Bundle> bundles = sub_alloc.bundles;
  for (auto it = log.records.rbegin(); it != log.records.rend(); ++it) {
    const Value got = bundle_value(log.initial, it->agent, it->removed_goods);
    const Value need = log.alpha * it->pre_mms.at(it->agent_index);
    if (got < need) {
      throw InternalInvariantError("reinstated agent " + std::to_string(it->agent) + " gets " + got.str() +
                                       " below alpha * MMS = " + need.str(),
                                   "{}");
    }
    bundles.insert(bundles.begin() + static_cast<std::ptrdiff_t>(it->agent_index), it->removed_goods);
  }
  Allocation out{std::move(bundles), true};
  validate_allocation(log.initial, out);
  return out;
}

}  // namespace mmsfair
