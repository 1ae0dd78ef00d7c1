#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "alo/json_io.hpp"
#include "alo/registry.hpp"
#include "alo/sim.hpp"

namespace alo::sim {

namespace {

using nlohmann::json;

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3 || !std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_number(); }))
    throw Error(ErrorCode::InvalidRequest, what + " must be an array of three numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <class T>
json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, Vec3>)
    return vec(*v);
  else
    return *v;
}

std::string jsonl(const auto& records) {
  std::string out;
  for (const auto& r : records) {
    if constexpr (std::is_same_v<std::decay_t<decltype(r)>, StepObject>)
      out += alo::to_json(r).dump();
    else
      out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

json to_json(const Snapshot& s) {
  return {{"tick", s.tick},
          {"entity", s.entity},
          {"position", vec(s.position)},
          {"velocity", vec(s.velocity)},
          {"heading", s.heading},
          {"skill", s.skill},
          {"primitive", s.primitive ? json(to_string(*s.primitive)) : json(nullptr)},
          {"state", s.state},
          {"boundaryContact", s.boundary_contact},
          {"nearestDistance", std::isfinite(s.nearest_distance) ? json(s.nearest_distance) : json(nullptr)},
          {"threat", optional_json(s.threat)},
          {"rule", optional_json(s.rule)},
          {"event", optional_json(s.event)}};
}

std::string Trace::steps_jsonl() const { return jsonl(steps); }
std::string Trace::snapshots_jsonl() const { return jsonl(snapshots); }

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidRequest, "scenario must be a JSON object");
  Scenario s;
  try {
    if (j.contains("bounds")) {
      s.bounds.min = vec_from(j.at("bounds").at("min"), "bounds.min");
      s.bounds.max = vec_from(j.at("bounds").at("max"), "bounds.max");
    }
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("dt")) s.dt = j.at("dt").get<double>();
    for (const auto& e : j.at("entities")) s.entities.push_back({e.at("alo").get<std::string>(), vec_from(e.at("position"), "position")});
    if (j.contains("interactions")) s.interactions = j.at("interactions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidRequest, std::string("scenario: ") + e.what());
  }
  return s;
}

json to_json(const Scenario& s) {
  json entities = json::array();
  for (const auto& p : s.entities) entities.push_back({{"alo", p.alo}, {"position", vec(p.position)}});
  return {{"bounds", {{"min", vec(s.bounds.min)}, {"max", vec(s.bounds.max)}}},
          {"seed", s.seed},
          {"dt", s.dt},
          {"entities", entities},
          {"interactions", s.interactions}};
}

std::vector<InteractionRule> scenario_rules(const Registry& reg, const Scenario& s) {
  auto placed = [&](const std::string& name) {
    return std::any_of(s.entities.begin(), s.entities.end(), [&](const Placement& p) { return p.alo == name; });
  };
  std::vector<InteractionRule> rules;
  if (!s.interactions.empty()) {
    for (const auto& name : s.interactions) {
      if (!reg.contains(name)) throw Error(ErrorCode::UnknownName, "no ALO named '" + name + "'");
      auto pair = reg.get(name);
      rules.insert(rules.end(), pair.interactions.begin(), pair.interactions.end());
    }
    return rules;
  }
  for (const auto& name : reg.names())
    for (const auto& rule : reg.get(name).interactions)
      if (placed(rule.first) && placed(rule.second)) rules.push_back(rule);
  return rules;
}

World build_world(const Registry& reg, const Scenario& s) {
  World w = World::spawn(s.bounds, s.seed);
  for (const auto& p : s.entities) {
    if (!reg.contains(p.alo)) throw Error(ErrorCode::UnknownName, "no ALO named '" + p.alo + "'");
    w.add_entity(reg.get(p.alo), p.position);
  }
  for (const auto& rule : scenario_rules(reg, s)) w.bind_interaction(rule);
  return w;
}

}  // namespace alo::sim
