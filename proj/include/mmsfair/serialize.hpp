#pragma once

// JSON renderings of core objects. Goods are named through a GoodNames table;
// ids without an entry fall back to "g<k>" for real goods and "d<k>" for
// dummies (1-based), which is also how generated instances name their goods.

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mmsfair/bagfill.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/reduction.hpp"
#include "mmsfair/value.hpp"

namespace mmsfair {

using json = nlohmann::json;

class GoodNames {
 public:
  GoodNames() = default;

  void set(GoodId id, std::string name) {
    if (auto it = by_name_.find(name); it != by_name_.end() && it->second != id) {
      throw ValidationError("goods", "duplicate good id '" + name + "'");
    }
    by_name_[name] = id;
    by_id_[id] = std::move(name);
  }

  std::string name(GoodId id) const {
    if (auto it = by_id_.find(id); it != by_id_.end()) return it->second;
    return (id.is_dummy() ? "d" : "g") + std::to_string(id.index() + 1);
  }

  std::optional<GoodId> find(const std::string& name) const {
    if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
    return std::nullopt;
  }

 private:
  std::map<GoodId, std::string> by_id_;
  std::map<std::string, GoodId> by_name_;
};

inline json to_json(const Value& v) { return v.str(); }

inline Value value_from_json(const json& j, const std::string& field) {
  if (j.is_number_integer()) return Value::parse(j.dump());
  if (j.is_string()) {
    try {
      return Value::parse(j.get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(field, e.what());
    }
  }
  throw ValidationError(field, "expected an integer or a \"p/q\" string");
}

inline json bundle_json(const Bundle& b, const GoodNames& names) {
  json arr = json::array();
  for (GoodId g : b) arr.push_back(names.name(g));
  return arr;
}

/// Instance in the interchange schema. Agent keys are decimal indices.
inline json instance_json(const Instance& inst, const GoodNames& names = {}) {
  json j;
  j["agents"] = inst.agents();
  j["goods"] = bundle_json(inst.goods, names);
  j["dummies"] = bundle_json(inst.dummies, names);
  json vals = json::object();
  const auto all = inst.all_goods();
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    json row = json::object();
    for (std::size_t c = 0; c < all.size(); ++c) row[names.name(all[c])] = to_json(inst.valuation[i][c]);
    vals[std::to_string(i)] = std::move(row);
  }
  j["valuations"] = std::move(vals);
  return j;
}

inline json allocation_json(const Allocation& alloc, const GoodNames& names = {}) {
  json j = json::object();
  for (AgentIndex i = 0; i < alloc.agents(); ++i) j[std::to_string(i)] = bundle_json(alloc.bundles[i], names);
  return j;
}

inline json reduction_log_json(const ReductionLog& log, const GoodNames& names = {}) {
  json arr = json::array();
  for (const auto& rec : log.records) {
    json r;
    r["rule"] = to_string(rec.rule);
    r["agent"] = rec.agent;
    r["goods"] = bundle_json(rec.removed_goods, names);
    json pre = json::array();
    for (const Value& v : rec.pre_mms) pre.push_back(to_json(v));
    r["pre_mms"] = std::move(pre);
    if (rec.dummy_created) {
      json d;
      d["id"] = names.name(rec.dummy_created->id);
      json values = json::array();
      for (const Value& v : rec.dummy_created->values) values.push_back(to_json(v));
      d["values"] = std::move(values);
      r["dummy"] = std::move(d);
    }
    arr.push_back(std::move(r));
  }
  return arr;
}

inline json bag_trace_json(const BagFillResult& result, const GoodNames& names = {}) {
  json arr = json::array();
  for (const auto& ev : result.trace) {
    json e;
    e["event"] = ev.kind == BagEvent::Kind::Fill ? "fill" : "assign";
    e["bag"] = ev.bag;
    if (ev.good) e["good"] = names.name(*ev.good);
    e["agent"] = ev.agent;
    e["bag_value"] = to_json(ev.bag_value);
    arr.push_back(std::move(e));
  }
  return arr;
}

}  // namespace mmsfair
