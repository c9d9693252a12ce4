#pragma once

// Executable forms of the structural facts the 3/4-style analysis relies on.
// Each check returns the list of violations it found (empty means it holds),
// so callers can either assert or aggregate across many instances.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/ordering.hpp"
#include "mmsfair/reduction.hpp"

namespace mmsfair {

struct Violation {
  std::string check;
  AgentIndex agent = 0;
  std::string detail;
};

using Violations = std::vector<Violation>;

inline std::string describe(const Violations& vs) {
  std::string out;
  for (const auto& v : vs) out += v.check + " (agent " + std::to_string(v.agent) + "): " + v.detail + "\n";
  return out;
}

/// v_i(S_k) < alpha * MMS_i for every agent and every rule.
inline Violations check_irreducible(const Instance& inst, const Value& alpha, std::span<const Value> shares) {
  Violations out;
  for (Rule r : {Rule::R1, Rule::R2, Rule::R3, Rule::R4}) {
    const Bundle s = rule_bundle(inst, r);
    if (s.empty()) continue;
    for (AgentIndex i = 0; i < inst.agents(); ++i) {
      const Value v = bundle_value(inst, i, s);
      if (v >= alpha * shares[i]) {
        out.push_back({"irreducible", i, to_string(r) + " bundle worth " + v.str() + " >= alpha*MMS " +
                                             (alpha * shares[i]).str()});
      }
    }
  }
  return out;
}

/// For k in {1,2,3}: every good at 1-based rank j > (k-1)n is worth less than
/// alpha * MMS_i / k.
inline Violations check_rank_bounds(const Instance& inst, const Value& alpha, std::span<const Value> shares) {
  Violations out;
  const std::size_t n = inst.agents();
  for (long k = 1; k <= 3; ++k) {
    for (AgentIndex i = 0; i < n; ++i) {
      const Value bound = alpha * shares[i] / Value(k);
      const auto row = inst.real_row(i);
      for (std::size_t j = static_cast<std::size_t>(k - 1) * n; j < row.size(); ++j) {
        if (row[j] >= bound) {
          out.push_back({"rank-bound", i, "rank " + std::to_string(j + 1) + " worth " + row[j].str() +
                                              " >= alpha*MMS/" + std::to_string(k) + " = " + bound.str()});
        }
      }
    }
  }
  return out;
}

/// At least 2n real goods.
inline Violations check_goods_count(const Instance& inst) {
  if (inst.goods.size() >= 2 * inst.agents()) return {};
  return {{"goods-count", 0, std::to_string(inst.goods.size()) + " goods for " + std::to_string(inst.agents()) +
                                 " agents"}};
}

/// Ordered and normalized instances: v_k + v_{2n-k+1} > 1 implies
/// v_{2n-k+1} <= 1/3 and v_k > 2/3.
inline Violations check_pair_bound(const Instance& inst) {
  Violations out;
  const std::size_t n = inst.agents();
  for (AgentIndex i = 0; i < n; ++i) {
    const auto row = inst.real_row(i);
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t partner = 2 * n - k + 1;
      if (partner > row.size()) continue;
      const Value& hi = row[k - 1];
      const Value& lo = row[partner - 1];
      if (hi + lo > Value(1) && (lo > Value(1, 3) || hi <= Value(2, 3))) {
        out.push_back({"pair-bound", i, "ranks " + std::to_string(k) + "," + std::to_string(partner) + " worth " +
                                            hi.str() + " + " + lo.str()});
      }
    }
  }
  return out;
}

/// Normalized instances: every dummy is worth less than 4(alpha - 3/4)/3.
inline Violations check_dummy_bound(const Instance& inst, const Value& alpha) {
  Violations out;
  const Value bound = Value(4, 3) * (alpha - Value(3, 4));
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    for (std::size_t d = 0; d < inst.dummies.size(); ++d) {
      const Value& v = inst.valuation[i][inst.goods.size() + d];
      if (v >= bound) {
        out.push_back({"dummy-bound", i, to_string(inst.dummies[d]) + " worth " + v.str() + " >= " + bound.str()});
      }
    }
  }
  return out;
}

/// Both conditions of a valid reduction, recomputed with the oracle:
/// the recipient gets alpha times their share, and no survivor's share drops
/// when they split the remaining goods and dummies one way fewer.
inline Violations check_valid_reduction(const Instance& before, const ReductionRecord& rec, const Instance& after,
                                        const Value& alpha, MmsOracle& oracle) {
  Violations out;
  const auto shares_before = oracle.all_mms(before);
  const Value got = bundle_value(before, rec.agent_index, rec.removed_goods);
  if (got < alpha * shares_before[rec.agent_index]) {
    out.push_back({"valid-reduction/recipient", rec.agent_index,
                   "got " + got.str() + " < alpha*MMS " + (alpha * shares_before[rec.agent_index]).str()});
  }
  AgentIndex j_after = 0;
  for (AgentIndex j = 0; j < before.agents(); ++j) {
    if (j == rec.agent_index) continue;
    const Value share_after = oracle.partition(after.valuation[j_after], after.agents()).value;
    if (share_after < shares_before[j]) {
      out.push_back({"valid-reduction/survivor", j,
                     "MMS fell from " + shares_before[j].str() + " to " + share_after.str()});
    }
    ++j_after;
  }
  return out;
}

/// Ordered, normalized (every MMS exactly 1) and totally alpha-irreducible.
inline Violations check_oni(const Instance& inst, const Value& alpha, MmsOracle& oracle) {
  Violations out;
  if (!is_ordered(inst)) out.push_back({"ordered", 0, "values not non-increasing by rank"});
  const auto shares = oracle.all_mms(inst);
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    if (shares[i] != Value(1)) out.push_back({"normalized", i, "MMS is " + shares[i].str()});
  }
  if (out.empty()) {
    auto irr = check_irreducible(inst, alpha, shares);
    out.insert(out.end(), irr.begin(), irr.end());
  }
  return out;
}

}  // namespace mmsfair
