#pragma once

// End-to-end approximate-MMS solver:
//
//   peel zero-share agents
//   I1 = to_ordered(I)
//   I2 = reduce(I1, alpha)
//   I3 = to_ordered(normalize(I2))        -- asserted ordered/normalized/irreducible
//   A3 = complete_allocation(bag_fill(I3, alpha))
//   lift A3 back through the second ordering, the reductions and the first ordering.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mmsfair/bagfill.hpp"
#include "mmsfair/checks.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/normalize.hpp"
#include "mmsfair/ordering.hpp"
#include "mmsfair/reduction.hpp"
#include "mmsfair/serialize.hpp"

namespace mmsfair {

struct ClassicAlpha {};
struct ImprovedAlpha {};
using AlphaMode = std::variant<ClassicAlpha, ImprovedAlpha, Value>;

struct AlphaChoice {
  std::size_t n_original = 0;
  Value alpha;
  Value delta;  // alpha - 3/4
};

/// "classic", "improved" or a rational "p/q".
inline AlphaMode parse_alpha_mode(const std::string& text) {
  if (text == "classic") return ClassicAlpha{};
  if (text == "improved") return ImprovedAlpha{};
  return Value::parse(text);
}

inline AlphaChoice alpha_for(std::size_t n, const AlphaMode& mode) {
  if (n == 0) throw ContractError("alpha_for needs at least one agent");
  AlphaChoice choice;
  choice.n_original = n;
  const Value bound = max_guaranteed_alpha(n);
  if (std::holds_alternative<ClassicAlpha>(mode)) {
    choice.alpha = Value(3, 4);
  } else if (std::holds_alternative<ImprovedAlpha>(mode)) {
    choice.alpha = bound;
  } else {
    const Value& a = std::get<Value>(mode);
    if (a.sign() <= 0 || a > bound) {
      throw ValidationError("alpha", "requested " + a.str() + " must lie in (0, " + bound.str() + "] for " +
                                         std::to_string(n) + " agents; larger thresholds carry no guarantee, use "
                                         "'improved' for the largest one");
    }
    choice.alpha = a;
  }
  choice.delta = choice.alpha - Value(3, 4);
  return choice;
}

struct AgentOutcome {
  Value bundle_value;
  Value mms;
  std::optional<Value> ratio;  // absent when MMS is 0
};

/// Every intermediate object of one solve, for auditing and property checks.
struct PipelineStages {
  std::vector<AgentIndex> peeled;    // zero-share agents, original ids
  std::vector<AgentIndex> kept;      // the rest, original ids
  Instance kept_instance;            // original restricted to `kept`
  OrderedInstance first_order;
  std::optional<ReductionLog> reductions;
  std::optional<NormalizedInstance> normalized;
  std::optional<OrderedInstance> second_order;  // the ordered, normalized, irreducible instance
  std::optional<BagFillResult> bag_fill;
  std::optional<Allocation> oni_allocation;      // allocation of second_order.instance
  std::optional<Allocation> reduced_allocation;  // allocation of reductions->final
  std::optional<Allocation> ordered_allocation;  // allocation of first_order.instance
  std::optional<Allocation> kept_allocation;     // allocation of kept_instance
};

struct SolveReport {
  Allocation allocation;
  Value score;
  AlphaChoice alpha;
  std::vector<AgentOutcome> agents;
  PipelineStages stages;
};

namespace detail {

inline Instance restrict_agents(const Instance& inst, const std::vector<AgentIndex>& agents) {
  Instance out;
  out.goods = inst.goods;
  out.dummies = inst.dummies;
  for (AgentIndex a : agents) out.valuation.push_back(inst.valuation[a]);
  return out;
}

// Ordered instances name their goods by rank: r1, r2, ...
inline GoodNames rank_names(std::size_t m) {
  GoodNames names;
  for (std::size_t j = 0; j < m; ++j) names.set(GoodId::real(static_cast<std::uint32_t>(j)), "r" + std::to_string(j + 1));
  return names;
}

inline json stages_json(const PipelineStages& st) {
  json j;
  j["peeled_agents"] = st.peeled;
  j["kept_agents"] = st.kept;
  if (st.reductions) {
    const auto names = rank_names(st.first_order.map.goods);
    j["reductions"] = reduction_log_json(*st.reductions, names);
    j["reduced_instance"] = instance_json(st.reductions->final, names);
  }
  if (st.second_order) j["oni_instance"] = instance_json(st.second_order->instance, rank_names(st.second_order->map.goods));
  if (st.bag_fill) {
    const auto names = rank_names(st.second_order ? st.second_order->map.goods : 0);
    j["bag_fill"] = bag_trace_json(*st.bag_fill, names);
    j["bag_fill_succeeded"] = st.bag_fill->allocation.has_value();
  }
  return j;
}

inline std::string stages_trace_json(const PipelineStages& st) { return stages_json(st).dump(2); }

}  // namespace detail

inline SolveReport approx_mms(const Instance& instance, const AlphaChoice& choice, MmsOracle& oracle) {
  validate_instance(instance);
  if (instance.agents() == 0) throw ContractError("approx_mms needs at least one agent");
  if (!instance.dummies.empty()) throw ContractError("approx_mms takes instances without dummy goods");
  if (choice.n_original != instance.agents()) throw ContractError("alpha was chosen for a different agent count");
  const Value& alpha = choice.alpha;

  SolveReport report;
  report.alpha = choice;
  PipelineStages& st = report.stages;

  const std::vector<Value> shares = oracle.all_mms(instance);
  for (AgentIndex i = 0; i < instance.agents(); ++i) (shares[i].is_zero() ? st.peeled : st.kept).push_back(i);
  st.kept_instance = detail::restrict_agents(instance, st.kept);

  Allocation kept_alloc;
  if (!st.kept.empty()) {
    st.first_order = to_ordered(st.kept_instance);
    st.reductions = reduce(st.first_order.instance, alpha, oracle);
    const ReductionLog& log = *st.reductions;

    Allocation reduced_alloc;
    if (log.final.agents() == 1) {
      reduced_alloc = Allocation{{log.final.goods}, true};
    } else {
      st.normalized = normalize_with_certificates(log.final, oracle);
      st.second_order = to_ordered(st.normalized->instance);
      const Instance& oni = st.second_order->instance;
      auto bad = check_oni(oni, alpha, oracle);
      const auto few = check_goods_count(oni);
      bad.insert(bad.end(), few.begin(), few.end());
      if (!bad.empty()) {
        throw InternalInvariantError("reduced instance is not ordered/normalized/irreducible:\n" + describe(bad),
                                     detail::stages_trace_json(st));
      }
      st.bag_fill = bag_fill(oni, alpha);
      if (!st.bag_fill->allocation) {
        throw InternalInvariantError("bag filling ran out of goods on an irreducible instance",
                                     detail::stages_trace_json(st));
      }
      st.oni_allocation = complete_allocation(oni, *st.bag_fill->allocation);
      reduced_alloc = lift_ordered(st.second_order->map, st.normalized->instance, *st.oni_allocation);
    }
    st.reduced_allocation = reduced_alloc;
    st.ordered_allocation = lift_reductions(log, reduced_alloc);
    kept_alloc = lift_ordered(st.first_order.map, st.kept_instance, *st.ordered_allocation);
    st.kept_allocation = kept_alloc;
  }

  Allocation alloc;
  alloc.bundles.assign(instance.agents(), {});
  for (std::size_t k = 0; k < st.kept.size(); ++k) alloc.bundles[st.kept[k]] = kept_alloc.bundles[k];
  report.allocation = complete_allocation(instance, alloc);

  report.score = mms_score(instance, report.allocation, shares);
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    AgentOutcome o;
    o.bundle_value = bundle_value(instance, i, report.allocation.bundles[i]);
    o.mms = shares[i];
    if (!shares[i].is_zero()) o.ratio = o.bundle_value / shares[i];
    report.agents.push_back(std::move(o));
  }
  if (report.score < alpha) {
    throw InternalInvariantError("final allocation scores " + report.score.str() + " below alpha " + alpha.str(),
                                 detail::stages_trace_json(st));
  }
  return report;
}

inline SolveReport approx_mms(const Instance& instance, const AlphaChoice& choice, const MmsLimits& limits = {}) {
  MmsOracle oracle(limits);
  return approx_mms(instance, choice, oracle);
}

}  // namespace mmsfair
