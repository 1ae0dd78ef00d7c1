#include <algorithm>
#include <set>
#include <sstream>

#include "alo/codegen.hpp"
#include "alo/json_io.hpp"
#include "alo/registry.hpp"
#include "alo/script.hpp"

namespace alo::codegen {

using nlohmann::json;

namespace {

bool alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }

void require_valid(const ALO& alo) {
  if (auto report = validate(alo); !report.ok())
    throw Error(ErrorCode::InvalidALO, alo.name + ": " + report.to_string());
}

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json state_value(const StateVariable& var) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Vector3State>)
          return vec(s.value);
        else
          return s.value;
      },
      var.value);
}

// ---------------------------------------------------------------------------
// Script text

std::string js_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string js_literal(const Literal& v) {
  if (const double* d = std::get_if<double>(&v)) return script::format_number(*d);
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return js_string(std::get<std::string>(v));
}

std::string js_op(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "===";
    case CompareOp::ne: return "!==";
    default: return std::string(to_string(op));
  }
}

std::string js_subject(const std::string& subject) {
  if (subject == "state") return "this.state";
  if (subject == "env.nearest_distance") return "env.nearestDistance";
  if (subject == "env.boundary_contact") return "env.boundaryContact";
  if (subject == "env.heard") return "env.heard";
  return "this.states[" + js_string(subject) + "]";
}

std::string js_params(const SkillSpec& s) {
  if (s.parameters.empty()) return "{}";
  std::string out = "{ ";
  bool first = true;
  for (const auto& [k, v] : s.parameters) {
    if (!first) out += ", ";
    first = false;
    out += k + ": ";
    if (const double* d = std::get_if<double>(&v))
      out += script::format_number(*d);
    else
      out += js_string(std::get<std::string>(v));
  }
  return out + " }";
}

// Rule chain seen from one manager state: `state ==/!= s` conditions fold
// to always/never. nullopt `state` keeps every rule.
std::vector<const PolicyRule*> chain_for(const ManagerObject& m, const std::optional<std::string>& state) {
  std::vector<const PolicyRule*> out;
  for (const auto& r : m.policy) {
    const Condition& c = r.condition;
    if (state && !c.always && c.subject == "state" && (c.op == CompareOp::eq || c.op == CompareOp::ne)) {
      const auto* lit = std::get_if<std::string>(&c.value);
      bool equal = lit && *lit == *state;
      if (equal != (c.op == CompareOp::eq)) continue;  // never holds in this state
      out.push_back(&r);
      break;  // always holds; nothing after it can run
    }
    out.push_back(&r);
    if (c.always) break;
  }
  return out;
}

bool folds_to_always(const PolicyRule& r, const std::optional<std::string>& state) {
  if (r.condition.always) return true;
  return state && r.condition.subject == "state" &&
         (r.condition.op == CompareOp::eq || r.condition.op == CompareOp::ne);
}

void emit_chain(std::ostringstream& out, const std::vector<const PolicyRule*>& chain,
                const std::optional<std::string>& state, const std::string& indent) {
  for (const auto* r : chain) {
    std::string action = "this." + r->skill + "(dt);";
    if (r->next_state) action += " this.state = " + js_string(*r->next_state) + ";";
    action += " return;";
    if (folds_to_always(*r, state)) {
      out << indent << action << "\n";
      return;
    }
    out << indent << "if (" << js_subject(r->condition.subject) << " " << js_op(r->condition.op) << " "
        << js_literal(r->condition.value) << ") { " << action << " }\n";
  }
  out << indent << "this.world.idle(this, {}, dt); return;\n";
}

}  // namespace

std::string camel_case(std::string_view name) {
  std::string out;
  bool up = true;
  for (char c : name) {
    if (!alnum(c)) {
      up = true;
      continue;
    }
    out += (up && c >= 'a' && c <= 'z') ? static_cast<char>(c - 'a' + 'A') : c;
    up = false;
  }
  return out;
}

std::string update_fn_name(std::string_view name) { return "update" + camel_case(name) + "PerFrame"; }

std::string script_file_name(std::string_view name) {
  std::string base(name);
  std::replace(base.begin(), base.end(), ' ', '_');
  return base + ".update.harness.txt";
}

BehaviorManifest emit_manifest(const ALO& alo) {
  require_valid(alo);
  BehaviorManifest m;
  m.alo_name = alo.name;
  m.texture_hint = alo.name;
  std::set<std::string> seen;
  for (const auto& sub : alo.sub_objects) {
    for (const auto& s : sub.skills) {
      if (!seen.insert(s.name).second) continue;
      m.skills.push_back(s);
      m.max_speed = std::max(m.max_speed, skill_max_speed(s));
    }
    for (const auto& [key, var] : sub.states) m.states[sub.name + "." + key] = state_value(var);
  }
  m.policy = alo.manager.policy;
  m.initial_state = alo.manager.current_state;
  m.state_set = alo.manager.state_set;
  m.update_fn_name = update_fn_name(alo.name);
  return m;
}

json to_json(const BehaviorManifest& m) {
  json skills = json::array();
  for (const auto& s : m.skills) {
    json j = alo::to_json(s);
    j.erase("note");
    skills.push_back(j);
  }
  json policy = json::array();
  for (const auto& r : m.policy)
    policy.push_back({{"condition", alo::to_json(r.condition)},
                      {"text", script::condition_text(r.condition)},
                      {"skill", r.skill},
                      {"nextState", r.next_state ? json(*r.next_state) : json(nullptr)}});
  json states = json::object();
  for (const auto& [k, v] : m.states) states[k] = v;
  return {{"aloName", m.alo_name},
          {"entityKind", m.entity_kind},
          {"textureHint", m.texture_hint},
          {"skills", skills},
          {"managerPolicy", policy},
          {"initialState", m.initial_state},
          {"stateSet", m.state_set},
          {"states", states},
          {"maxSpeed", m.max_speed},
          {"updateFnName", m.update_fn_name}};
}

std::optional<Dialect> dialect_from_string(std::string_view s) {
  if (s == "harness-script") return Dialect::harness_script;
  return std::nullopt;
}

std::string emit_update_script(const ALO& alo, std::string_view dialect) {
  auto d = dialect_from_string(dialect);
  if (!d) throw Error(ErrorCode::UnsupportedDialect, "unsupported dialect '" + std::string(dialect) + "'");
  return emit_update_script(alo, *d);
}

std::string emit_update_script(const ALO& alo, Dialect) {
  BehaviorManifest m = emit_manifest(alo);
  std::string cls = camel_case(alo.name);
  if (!cls.empty() && cls[0] >= '0' && cls[0] <= '9') cls = "_" + cls;
  std::ostringstream out;
  out << "// " << alo.name << ": per-frame behavior in the harness-script dialect.\n"
      << "// The manifest in scene.bundle.json is what the harness executes.\n\n"
      << "class " << cls << " {\n"
      << "  constructor(sceneObject, world) {\n"
      << "    this.object = sceneObject;\n"
      << "    this.world = world;\n"
      << "    this.state = " << js_string(m.initial_state) << ";\n"
      << "    this.states = {\n";
  for (const auto& [k, v] : m.states) out << "      " << js_string(k) << ": " << v.dump() << ",\n";
  out << "    };\n"
      << "  }\n";

  for (const auto& s : m.skills) {
    out << "\n  " << s.name << "(dt) {\n"
        << "    this.world." << to_string(s.primitive) << "(this, " << js_params(s) << ", dt);\n"
        << "  }\n";
  }

  out << "\n  " << m.update_fn_name << "(dt) {\n"
      << "    if (this.world.airborne(this)) { this.world.continueJump(this, dt); return; }\n"
      << "    if (this.world.respondToInteraction(this, dt)) return;\n"
      << "    const env = this.world.sense(this);\n"
      << "    switch (this.state) {\n";
  for (const auto& state : m.state_set) {
    out << "      case " << js_string(state) << ": {\n";
    emit_chain(out, chain_for(alo.manager, state), state, "        ");
    out << "      }\n";
  }
  out << "      default: {\n";
  emit_chain(out, chain_for(alo.manager, std::nullopt), std::nullopt, "        ");
  out << "      }\n"
      << "    }\n"
      << "  }\n"
      << "}\n\n"
      << "export default " << cls << ";\n";
  return out.str();
}

SceneBundle emit_scene(const Registry& reg, const sim::Scenario& scenario) {
  // The simulator performs the bounds, name and skill checks; a bundle is
  // only emitted for a scenario the reference engine accepts.
  sim::World world = sim::build_world(reg, scenario);
  SceneBundle b;
  b.bounds = scenario.bounds;
  b.dt = scenario.dt;
  b.seed = scenario.seed;
  std::set<std::string> placed;
  for (const auto& e : world.entities()) {
    b.entities.push_back({e.id, e.alo.name, e.position});
    if (placed.insert(e.alo.name).second) b.manifests.push_back(emit_manifest(reg.get(e.alo.name)));
  }
  b.rules = world.rules();
  return b;
}

json to_json(const SceneBundle& b) {
  json entities = json::array();
  for (const auto& e : b.entities) entities.push_back({{"id", e.id}, {"alo", e.alo}, {"position", vec(e.position)}});
  json manifests = json::array();
  for (const auto& m : b.manifests) manifests.push_back(to_json(m));
  json rules = json::array();
  for (const auto& r : b.rules) rules.push_back(alo::to_json(r));
  return {{"schemaVersion", b.schema_version},
          {"worldBounds", {{"min", vec(b.bounds.min)}, {"max", vec(b.bounds.max)}}},
          {"dt", b.dt},
          {"seed", b.seed},
          {"entities", entities},
          {"manifests", manifests},
          {"interactionRules", rules}};
}

std::vector<std::string> bundle_errors(const json& bundle) {
  auto errors = schema_errors(bundle);
  if (!errors.empty()) return errors;
  std::set<std::string> names;
  for (const auto& m : bundle["manifests"])
    if (!names.insert(m["aloName"].get<std::string>()).second)
      errors.push_back("/manifests: duplicate manifest for " + m["aloName"].get<std::string>());
  for (std::size_t i = 0; i < bundle["entities"].size(); ++i)
    if (!names.count(bundle["entities"][i]["alo"].get<std::string>()))
      errors.push_back("/entities/" + std::to_string(i) + ": no manifest for its ALO");
  for (std::size_t i = 0; i < bundle["interactionRules"].size(); ++i)
    for (const auto& n : bundle["interactionRules"][i]["pair"])
      if (!names.count(n.get<std::string>()))
        errors.push_back("/interactionRules/" + std::to_string(i) + ": no manifest for " + n.get<std::string>());
  return errors;
}

}  // namespace alo::codegen
