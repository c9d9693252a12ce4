#pragma once

#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"

namespace mmsfair {

struct NormalizedInstance {
  Instance instance;
  // Per agent, the MMS partition (over goods and dummies) used for scaling.
  // Every cell is worth exactly 1 in the scaled instance.
  std::vector<std::vector<Bundle>> certificates;
};

/// Rescales each agent so that the cells of one of their MMS partitions are
/// each worth exactly 1: a good in cell P_j gets v / v(P_j). Dummies scale with
/// their cell like any other good. Every agent's MMS must be positive.
inline NormalizedInstance normalize_with_certificates(const Instance& instance, MmsOracle& oracle) {
  validate_instance(instance);
  NormalizedInstance out;
  out.instance.goods = instance.goods;
  out.instance.dummies = instance.dummies;
  const auto all = instance.all_goods();
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    const auto& row = instance.valuation[i];
    const IndexPartition& part = oracle.partition(row, instance.agents());
    if (part.value.sign() <= 0) {
      throw ContractError("normalize: agent " + std::to_string(i) + " has zero MMS");
    }
    std::vector<Value> scaled(row.size());
    std::vector<Bundle> cert;
    for (const auto& cell : part.cells) {
      Value cell_value;
      for (std::size_t c : cell) cell_value += row[c];
      Bundle b;
      for (std::size_t c : cell) {
        scaled[c] = row[c] / cell_value;
        b.push_back(all[c]);
      }
      cert.push_back(std::move(b));
    }
    out.instance.valuation.push_back(std::move(scaled));
    out.certificates.push_back(std::move(cert));
  }
  return out;
}

inline Instance normalize(const Instance& instance, MmsOracle& oracle) {
  return normalize_with_certificates(instance, oracle).instance;
}

}  // namespace mmsfair
