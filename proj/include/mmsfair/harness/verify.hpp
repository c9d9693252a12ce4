#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmsfair/errors.hpp"
#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"

namespace mmsfair::harness {

struct AgentVerdict {
  Value mms;
  Value bundle_value;
  std::optional<Value> ratio;  // absent when MMS is 0
  bool certified = false;      // MMS taken from a certificate, not a search
};

struct VerifyReport {
  std::vector<AgentVerdict> agents;
  Value score;
  Value alpha;
  bool pass = false;
};

/// Certificates: none, one partition shared by every agent, or one per agent.
/// An agent whose certificate attains total/n skips the search.
inline VerifyReport verify(const Instance& instance, const Allocation& allocation, const Value& alpha,
                           MmsOracle& oracle, const std::vector<std::vector<Bundle>>& certificates = {}) {
  validate_instance(instance);
  validate_allocation(instance, allocation);
  if (!allocation.complete) throw ContractError("verify needs a complete allocation");
  if (!certificates.empty() && certificates.size() != 1 && certificates.size() != instance.agents()) {
    throw ContractError("certificates must be shared or one per agent");
  }

  VerifyReport out;
  out.alpha = alpha;
  std::vector<Value> shares;
  for (AgentIndex i = 0; i < instance.agents(); ++i) {
    AgentVerdict v;
    std::optional<Value> cert;
    if (!certificates.empty()) cert = certified_mms(instance, i, certificates[certificates.size() == 1 ? 0 : i]);
    if (cert) {
      v.mms = *cert;
      v.certified = true;
    } else {
      v.mms = oracle.partition(instance.valuation[i], instance.agents()).value;
    }
    v.bundle_value = bundle_value(instance, i, allocation.bundles[i]);
    if (!v.mms.is_zero()) v.ratio = v.bundle_value / v.mms;
    shares.push_back(v.mms);
    out.agents.push_back(std::move(v));
  }
  out.score = mms_score(instance, allocation, shares);
  out.pass = out.score >= alpha;
  return out;
}

}  // namespace mmsfair::harness
