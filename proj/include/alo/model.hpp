#pragma once

// Abstract Language Object model: typed sub-objects, a manager with an
// ordered policy, an append-only step log and pairwise interaction rules.
// All types are plain values; equality is deep and exact.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "alo/errors.hpp"

namespace alo {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

// Identifiers name sub-objects, skills, states and labels:
// [A-Za-z_][A-Za-z0-9_-]*
bool is_identifier(std::string_view s);

// ALO names are display names and may contain single inner spaces and a
// leading digit ("cat meets roomba", "3D physical world").
bool is_alo_name(std::string_view s);

enum class Provenance { authored, llm_generated, derived };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// State variables

struct ScalarState {
  double value = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::string unit;  // may be empty
  friend bool operator==(const ScalarState&, const ScalarState&) = default;
};

struct BooleanState {
  bool value = false;
  friend bool operator==(const BooleanState&, const BooleanState&) = default;
};

struct LabelState {
  std::string value;
  std::vector<std::string> domain;  // declaration order is preserved
  friend bool operator==(const LabelState&, const LabelState&) = default;
};

struct Vector3State {
  Vec3 value;
  friend bool operator==(const Vector3State&, const Vector3State&) = default;
};

using StateValue = std::variant<ScalarState, BooleanState, LabelState, Vector3State>;

struct StateVariable {
  std::string name;
  StateValue value;
  friend bool operator==(const StateVariable&, const StateVariable&) = default;
};

enum class StateKind { scalar, boolean, label, vector3 };
StateKind kind_of(const StateVariable& v);
std::string_view to_string(StateKind k);

// ---------------------------------------------------------------------------
// Skills

enum class Primitive { move, rotate, jump, emit, wander, flee, seek, idle };

std::string_view to_string(Primitive p);
std::optional<Primitive> primitive_from_string(std::string_view s);

// Skill parameters are numbers or labels.
using ParamValue = std::variant<double, std::string>;

struct SkillSpec {
  std::string name;
  Primitive primitive = Primitive::idle;
  std::map<std::string, ParamValue> parameters;
  std::string note;  // e.g. the original name of an unknown primitive
  friend bool operator==(const SkillSpec&, const SkillSpec&) = default;
};

// Fastest speed a skill can impart (units/s); jump counts its launch speed.
double skill_max_speed(const SkillSpec& s);

inline constexpr double kGravity = 9.8;

// ---------------------------------------------------------------------------

struct SubObject {
  std::string name;
  std::vector<SkillSpec> skills;
  std::vector<std::string> knowledge;
  // Keyed by state name; StateVariable::name mirrors the key.
  std::map<std::string, StateVariable> states;
  friend bool operator==(const SubObject&, const SubObject&) = default;
};

// ---------------------------------------------------------------------------
// Manager policy

enum class CompareOp { lt, le, gt, ge, eq, ne };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> compare_op_from_string(std::string_view s);

// Literal on the right-hand side of a condition.
using Literal = std::variant<double, bool, std::string>;

// `always`, or `<subject> <op> <literal>` where subject is one of
//   state                  the manager's current state
//   env.<name>             a sensed variable (see env_variable_kind)
//   <sub>.<state>          a sub-object state variable
struct Condition {
  bool always = true;
  std::string subject;
  CompareOp op = CompareOp::eq;
  Literal value = 0.0;
  friend bool operator==(const Condition&, const Condition&) = default;
};

// Kind of a sensed environment variable, or nullopt if the name is unknown.
std::optional<StateKind> env_variable_kind(std::string_view name);

struct PolicyRule {
  Condition condition;
  std::string skill;
  std::optional<std::string> next_state;
  friend bool operator==(const PolicyRule&, const PolicyRule&) = default;
};

struct ManagerObject {
  std::string current_state;
  std::vector<std::string> state_set;
  std::vector<PolicyRule> policy;
  double reward_accumulator = 0.0;  // logged only
  friend bool operator==(const ManagerObject&, const ManagerObject&) = default;
};

struct StepObject {
  std::int64_t index = 0;
  std::int64_t tick = 0;
  std::string actor;
  std::string skill;
  std::string resulting_state;
  std::string note;
  friend bool operator==(const StepObject&, const StepObject&) = default;
};

enum class Responder { first, second };

// When an entity of one ALO comes within trigger_radius of an entity of the
// other, the responder is forced into response_skill.
struct InteractionRule {
  std::string name;
  std::string first;
  std::string second;
  double trigger_radius = 10.0;
  Responder responder = Responder::second;
  std::string response_skill;

  const std::string& responder_name() const { return responder == Responder::first ? first : second; }
  const std::string& trigger_name() const { return responder == Responder::first ? second : first; }
  friend bool operator==(const InteractionRule&, const InteractionRule&) = default;
};

struct ALO {
  std::string name;
  std::vector<SubObject> sub_objects;
  ManagerObject manager;
  std::vector<StepObject> steps;
  std::vector<InteractionRule> interactions;
  Provenance provenance = Provenance::authored;

  const std::string& main_obj() const { return name; }
  // First skill with this name in sub-object order.
  const SkillSpec* find_skill(std::string_view skill) const;
  const StateVariable* find_state(std::string_view sub, std::string_view state) const;

  friend bool operator==(const ALO&, const ALO&) = default;
};

// Deep equality ignoring provenance (which records origin, not structure).
bool structurally_equal(const ALO& a, const ALO& b);

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;  // e.g. "DomainExceeded"
  std::string path;  // e.g. "subObjList[0].states.battery"
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
  std::string to_string() const;
};

// Checks every local invariant. Interactions are checked for shape only;
// whether their ALO names and skills exist is a registry concern.
ValidationReport validate(const ALO& alo);

struct ValidationFailed : Error {
  ValidationReport report;
  explicit ValidationFailed(ValidationReport r)
      : Error(ErrorCode::ValidationFailed, "validation failed: " + r.to_string()),
        report(std::move(r)) {}
};

// Builds an authored ALO with an empty step log.
// Throws Error{EmptyName | InvalidName | DuplicateSubObject |
// DanglingSkillReference} or ValidationFailed for any other violation.
ALO new_alo(std::string name, std::vector<SubObject> subobjects, ManagerObject manager);

// Appends a step with the next index; throws PreconditionFailed if tick
// would decrease.
void append_step(ALO& alo, StepObject step);

}  // namespace alo
