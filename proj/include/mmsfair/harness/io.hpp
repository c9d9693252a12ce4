#pragma once

// Interchange format:
//   {"agents": n, "goods": ["g1", ...], "dummies": [...],
//    "valuations": {"0": {"g1": "3/4", "g2": 2, ...}, ...}}
// Allocations: {"0": ["g1", ...], "1": [...]}.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "mmsfair/harness/verify.hpp"
#include "mmsfair/pipeline.hpp"
#include "mmsfair/serialize.hpp"

namespace mmsfair::harness {

struct LabeledInstance {
  Instance instance;
  GoodNames names;
};

namespace detail {

inline std::vector<std::string> string_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw ValidationError(field, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline std::size_t agent_key(const std::string& key, std::size_t n, const std::string& field) {
  std::size_t pos = 0;
  unsigned long idx = 0;
  try {
    idx = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || key.empty() || idx >= n) {
    throw ValidationError(field, "'" + key + "' is not an agent index below " + std::to_string(n));
  }
  return idx;
}

}  // namespace detail

inline LabeledInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("instance", "expected a JSON object");
  if (!j.contains("agents") || !j["agents"].is_number_integer() || j["agents"].get<long>() < 0) {
    throw ValidationError("agents", "expected a non-negative integer");
  }
  const auto n = j["agents"].get<std::size_t>();
  if (!j.contains("goods")) throw ValidationError("goods", "missing");
  const auto goods = detail::string_list(j["goods"], "goods");
  const auto dummies = j.contains("dummies") ? detail::string_list(j["dummies"], "dummies") : std::vector<std::string>{};

  LabeledInstance out;
  for (std::size_t k = 0; k < goods.size(); ++k) {
    const GoodId id = GoodId::real(static_cast<std::uint32_t>(k));
    out.names.set(id, goods[k]);
    out.instance.goods.push_back(id);
  }
  for (std::size_t k = 0; k < dummies.size(); ++k) {
    const GoodId id = GoodId::dummy(static_cast<std::uint32_t>(k));
    out.names.set(id, dummies[k]);
    out.instance.dummies.push_back(id);
  }

  if (!j.contains("valuations") || !j["valuations"].is_object()) {
    throw ValidationError("valuations", "expected an object keyed by agent index");
  }
  const json& vals = j["valuations"];
  out.instance.valuation.assign(n, {});
  std::set<std::size_t> rows_seen;
  for (const auto& [key, row] : vals.items()) {
    const std::size_t i = detail::agent_key(key, n, "valuations");
    rows_seen.insert(i);
    const std::string field = "valuations[" + key + "]";
    if (!row.is_object()) throw ValidationError(field, "expected an object keyed by good id");
    const auto all = out.instance.all_goods();
    std::vector<Value> dense(all.size());
    std::vector<bool> filled(all.size(), false);
    for (const auto& [good, value] : row.items()) {
      const auto id = out.names.find(good);
      if (!id) throw ValidationError(field, "unknown good '" + good + "'");
      const std::size_t col = *out.instance.column(*id);
      dense[col] = value_from_json(value, field + "[" + good + "]");
      filled[col] = true;
    }
    for (std::size_t c = 0; c < all.size(); ++c) {
      if (!filled[c]) throw ValidationError(field, "missing value for good '" + out.names.name(all[c]) + "'");
    }
    out.instance.valuation[i] = std::move(dense);
  }
  if (rows_seen.size() != n) throw ValidationError("valuations", "expected one row per agent");
  validate_instance(out.instance);
  return out;
}

inline json instance_to_json(const LabeledInstance& li) { return instance_json(li.instance, li.names); }

inline Allocation allocation_from_json(const json& j, const LabeledInstance& li) {
  if (!j.is_object()) throw ValidationError("allocation", "expected an object keyed by agent index");
  Allocation alloc;
  alloc.bundles.assign(li.instance.agents(), {});
  for (const auto& [key, list] : j.items()) {
    const std::size_t i = detail::agent_key(key, li.instance.agents(), "allocation");
    for (const auto& name : detail::string_list(list, "allocation[" + key + "]")) {
      const auto id = li.names.find(name);
      if (!id || id->is_dummy()) throw ValidationError("allocation[" + key + "]", "unknown good '" + name + "'");
      alloc.bundles[i].push_back(*id);
    }
  }
  validate_allocation(li.instance, alloc);
  alloc.complete = unallocated_goods(li.instance, alloc).empty();
  return alloc;
}

inline json report_json(const SolveReport& report, const GoodNames& names) {
  json j;
  j["alpha"] = to_json(report.alpha.alpha);
  j["delta"] = to_json(report.alpha.delta);
  j["n"] = report.alpha.n_original;
  j["score"] = to_json(report.score);
  j["allocation"] = allocation_json(report.allocation, names);
  json agents = json::array();
  for (const auto& a : report.agents) {
    json r;
    r["bundle_value"] = to_json(a.bundle_value);
    r["mms"] = to_json(a.mms);
    r["ratio"] = a.ratio ? json(to_json(*a.ratio)) : json(nullptr);
    agents.push_back(std::move(r));
  }
  j["agents"] = std::move(agents);
  j["reductions"] = report.stages.reductions ? report.stages.reductions->records.size() : 0;
  j["bag_fill_events"] = report.stages.bag_fill ? report.stages.bag_fill->trace.size() : 0;
  return j;
}

inline json verify_json(const VerifyReport& report) {
  json j;
  j["alpha"] = to_json(report.alpha);
  j["score"] = to_json(report.score);
  j["pass"] = report.pass;
  json agents = json::array();
  for (const auto& a : report.agents) {
    json r;
    r["mms"] = to_json(a.mms);
    r["bundle_value"] = to_json(a.bundle_value);
    r["ratio"] = a.ratio ? json(to_json(*a.ratio)) : json(nullptr);
    r["certified"] = a.certified;
    r["pass"] = !a.ratio || *a.ratio >= report.alpha;
    agents.push_back(std::move(r));
  }
  j["agents"] = std::move(agents);
  return j;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("input", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("input", std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

}  // namespace mmsfair::harness
