#include "alo/json_io.hpp"

namespace alo {

using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::CorruptEntry, "malformed ALO JSON: " + what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) corrupt(std::string("expected object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) corrupt(std::string("missing field '") + key + "'");
  return *it;
}

std::string str(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) corrupt(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

double num(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) corrupt(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) corrupt(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

const json& arr(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) corrupt(std::string("field '") + key + "' must be an array");
  return v;
}

std::vector<std::string> strings(const json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : arr(j, key)) {
    if (!v.is_string()) corrupt(std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json literal_to_json(const Literal& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

Literal literal_from_json(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  corrupt("condition value must be number, boolean or string");
}

StateVariable state_from_json(const std::string& name, const json& j) {
  StateVariable var;
  var.name = name;
  std::string kind = str(j, "kind");
  if (kind == "scalar") {
    ScalarState s;
    s.value = num(j, "value");
    s.min = num(j, "min");
    s.max = num(j, "max");
    if (j.contains("unit")) s.unit = str(j, "unit");
    var.value = s;
  } else if (kind == "boolean") {
    const json& v = field(j, "value");
    if (!v.is_boolean()) corrupt("boolean state value must be a boolean");
    var.value = BooleanState{v.get<bool>()};
  } else if (kind == "label") {
    var.value = LabelState{str(j, "value"), strings(j, "domain")};
  } else if (kind == "vector3") {
    const json& v = arr(j, "value");
    if (v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
      corrupt("vector3 state value must be three numbers");
    var.value = Vector3State{{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()}};
  } else {
    corrupt("unknown state kind '" + kind + "'");
  }
  return var;
}

SkillSpec skill_from_json(const json& j) {
  SkillSpec s;
  s.name = str(j, "name");
  auto prim = primitive_from_string(str(j, "primitive"));
  if (!prim) corrupt("unknown primitive '" + str(j, "primitive") + "'");
  s.primitive = *prim;
  const json& params = field(j, "parameters");
  if (!params.is_object()) corrupt("skill parameters must be an object");
  for (const auto& [k, v] : params.items()) {
    if (v.is_number())
      s.parameters[k] = v.get<double>();
    else if (v.is_string())
      s.parameters[k] = v.get<std::string>();
    else
      corrupt("skill parameter '" + k + "' must be number or string");
  }
  if (j.contains("note")) s.note = str(j, "note");
  return s;
}

Condition condition_from_json(const json& j) {
  Condition c;
  if (j.is_string() && j.get<std::string>() == "always") return c;
  c.always = false;
  c.subject = str(j, "subject");
  auto op = compare_op_from_string(str(j, "op"));
  if (!op) corrupt("unknown comparison operator");
  c.op = *op;
  c.value = literal_from_json(field(j, "value"));
  return c;
}

}  // namespace

json to_json(const StateVariable& var) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScalarState>) {
          json j{{"kind", "scalar"}, {"value", s.value}, {"min", s.min}, {"max", s.max}};
          if (!s.unit.empty()) j["unit"] = s.unit;
          return j;
        } else if constexpr (std::is_same_v<T, BooleanState>) {
          return {{"kind", "boolean"}, {"value", s.value}};
        } else if constexpr (std::is_same_v<T, LabelState>) {
          return {{"kind", "label"}, {"value", s.value}, {"domain", s.domain}};
        } else {
          return {{"kind", "vector3"}, {"value", json::array({s.value.x, s.value.y, s.value.z})}};
        }
      },
      var.value);
}

json to_json(const SkillSpec& skill) {
  json params = json::object();
  for (const auto& [k, v] : skill.parameters)
    params[k] = std::visit([](const auto& x) { return json(x); }, v);
  json j{{"name", skill.name}, {"primitive", to_string(skill.primitive)}, {"parameters", params}};
  if (!skill.note.empty()) j["note"] = skill.note;
  return j;
}

json to_json(const Condition& c) {
  if (c.always) return "always";
  return {{"subject", c.subject}, {"op", to_string(c.op)}, {"value", literal_to_json(c.value)}};
}

json to_json(const StepObject& s) {
  return {{"index", s.index},  {"tick", s.tick},
          {"actor", s.actor},  {"skill", s.skill},
          {"resultingState", s.resulting_state}, {"note", s.note}};
}

json to_json(const InteractionRule& r) {
  return {{"name", r.name},
          {"pair", json::array({r.first, r.second})},
          {"triggerRadius", r.trigger_radius},
          {"responder", r.responder == Responder::first ? "first" : "second"},
          {"responseSkill", r.response_skill}};
}

json to_json(const ALO& alo) {
  json subs = json::array();
  for (const auto& sub : alo.sub_objects) {
    json skills = json::array();
    for (const auto& s : sub.skills) skills.push_back(to_json(s));
    json states = json::object();
    for (const auto& [k, v] : sub.states) states[k] = to_json(v);
    subs.push_back({{"name", sub.name},
                    {"skills", skills},
                    {"knowledge", sub.knowledge},
                    {"states", states}});
  }
  json policy = json::array();
  for (const auto& rule : alo.manager.policy) {
    json r{{"when", to_json(rule.condition)}, {"skill", rule.skill}};
    if (rule.next_state) r["nextState"] = *rule.next_state;
    policy.push_back(r);
  }
  json steps = json::array();
  for (const auto& s : alo.steps) steps.push_back(to_json(s));
  json interactions = json::array();
  for (const auto& r : alo.interactions) interactions.push_back(to_json(r));

  return {{"name", alo.name},
          {"mainObj", alo.main_obj()},
          {"provenance", to_string(alo.provenance)},
          {"subObjList", subs},
          {"managerObj",
           {{"currentState", alo.manager.current_state},
            {"stateSet", alo.manager.state_set},
            {"policy", policy},
            {"rewardAccumulator", alo.manager.reward_accumulator}}},
          {"stepObjList", steps},
          {"interactions", interactions}};
}

InteractionRule interaction_from_json(const json& j) {
  InteractionRule r;
  r.name = str(j, "name");
  const json& pair = arr(j, "pair");
  if (pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
    corrupt("interaction pair must be two names");
  r.first = pair[0].get<std::string>();
  r.second = pair[1].get<std::string>();
  r.trigger_radius = num(j, "triggerRadius");
  std::string responder = str(j, "responder");
  if (responder == "first")
    r.responder = Responder::first;
  else if (responder == "second")
    r.responder = Responder::second;
  else
    corrupt("responder must be 'first' or 'second'");
  r.response_skill = str(j, "responseSkill");
  return r;
}

ALO alo_from_json(const json& j) {
  ALO alo;
  alo.name = str(j, "name");
  if (j.contains("mainObj") && str(j, "mainObj") != alo.name) corrupt("mainObj must equal name");
  auto prov = provenance_from_string(str(j, "provenance"));
  if (!prov) corrupt("unknown provenance");
  alo.provenance = *prov;

  for (const auto& sj : arr(j, "subObjList")) {
    SubObject sub;
    sub.name = str(sj, "name");
    for (const auto& k : arr(sj, "skills")) sub.skills.push_back(skill_from_json(k));
    sub.knowledge = strings(sj, "knowledge");
    const json& states = field(sj, "states");
    if (!states.is_object()) corrupt("states must be an object");
    for (const auto& [k, v] : states.items()) sub.states.emplace(k, state_from_json(k, v));
    alo.sub_objects.push_back(std::move(sub));
  }

  const json& mj = field(j, "managerObj");
  alo.manager.current_state = str(mj, "currentState");
  alo.manager.state_set = strings(mj, "stateSet");
  alo.manager.reward_accumulator = num(mj, "rewardAccumulator");
  for (const auto& rj : arr(mj, "policy")) {
    PolicyRule rule;
    rule.condition = condition_from_json(field(rj, "when"));
    rule.skill = str(rj, "skill");
    if (rj.contains("nextState")) rule.next_state = str(rj, "nextState");
    alo.manager.policy.push_back(std::move(rule));
  }

  for (const auto& sj : arr(j, "stepObjList")) {
    StepObject s;
    s.index = integer(sj, "index");
    s.tick = integer(sj, "tick");
    s.actor = str(sj, "actor");
    s.skill = str(sj, "skill");
    s.resulting_state = str(sj, "resultingState");
    s.note = str(sj, "note");
    alo.steps.push_back(std::move(s));
  }
  if (j.contains("interactions"))
    for (const auto& rj : arr(j, "interactions")) alo.interactions.push_back(interaction_from_json(rj));
  return alo;
}

}  // namespace alo
