#pragma once

// Scene bundles and per-frame update scripts for the browser harness.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "alo/model.hpp"
#include "alo/sim.hpp"

namespace alo {
class Registry;
}

namespace alo::codegen {

inline constexpr std::string_view kSchemaVersion = "alo-scene/1";

// "cat meets roomba" -> "CatMeetsRoomba"; non-alphanumerics separate words.
std::string camel_case(std::string_view name);

// "update" + camel_case(name) + "PerFrame".
std::string update_fn_name(std::string_view name);

// "<name>.update.harness.txt" with spaces replaced by underscores.
std::string script_file_name(std::string_view name);

struct BehaviorManifest {
  std::string alo_name;
  std::string entity_kind = "unit-cube";
  std::string texture_hint;  // the ALO name
  std::vector<SkillSpec> skills;  // first skill of each name, sub-object order
  std::vector<PolicyRule> policy;
  std::string initial_state;
  std::vector<std::string> state_set;
  // "<sub>.<state>" -> value, for policy conditions over sub-object states.
  std::map<std::string, nlohmann::json> states;
  double max_speed = 0.0;
  std::string update_fn_name;
};

// Throws Error{InvalidALO}.
BehaviorManifest emit_manifest(const ALO& alo);
nlohmann::json to_json(const BehaviorManifest& m);

enum class Dialect { harness_script };
std::optional<Dialect> dialect_from_string(std::string_view s);

// Class-shaped script: a constructor taking the prepared scene object and
// world handles, one method per skill and the per-frame update method that
// switches over manager states. Throws Error{InvalidALO}.
std::string emit_update_script(const ALO& alo, Dialect dialect = Dialect::harness_script);
// Throws Error{UnsupportedDialect} for anything but "harness-script".
std::string emit_update_script(const ALO& alo, std::string_view dialect);

struct BundleEntity {
  std::string id;
  std::string alo;
  Vec3 position;
};

struct SceneBundle {
  std::string schema_version{kSchemaVersion};
  sim::Bounds bounds;
  double dt = sim::kDefaultDt;
  std::uint64_t seed = 0;
  std::vector<BundleEntity> entities;
  std::vector<BehaviorManifest> manifests;  // one per distinct placed ALO
  std::vector<InteractionRule> rules;
};

// Throws Error{UnknownName}, Error{OutOfBounds}, Error{MissingResponseSkill}.
SceneBundle emit_scene(const Registry& reg, const sim::Scenario& scenario);
nlohmann::json to_json(const SceneBundle& b);

// The published JSON Schema (draft-04) for scene bundles.
const std::string& bundle_schema();

// Schema violations as "<json pointer>: <keyword>" lines; empty when valid.
std::vector<std::string> schema_errors(const nlohmann::json& bundle);

// Schema check plus the cross-references the schema cannot express: rule
// pairs and entities must name manifests in the bundle.
std::vector<std::string> bundle_errors(const nlohmann::json& bundle);

}  // namespace alo::codegen
