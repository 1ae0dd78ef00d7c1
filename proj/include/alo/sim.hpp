#pragma once

// Deterministic tick-based world. Each tick visits entities in insertion
// order and for each one: senses the environment, applies the first
// matching interaction rule or else the first matching policy rule, runs
// the chosen skill's kinematics, clamps to the bounds and logs one step.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "alo/model.hpp"

namespace alo {
class Registry;
}

namespace alo::sim {

inline constexpr double kDefaultDt = 1.0 / 60.0;

struct Bounds {
  Vec3 min{0.0, 0.0, 0.0};
  Vec3 max{100.0, 100.0, 100.0};

  bool contains(const Vec3& p) const;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Entity {
  std::string id;         // "<alo name>#<ordinal>", ordinal from 1 per ALO
  ALO alo;                // private copy; its manager state evolves
  Vec3 position;
  Vec3 velocity;
  double heading = 0.0;   // radians in the xz plane; direction (cos, 0, sin)
  std::optional<std::string> active_skill;
  double max_speed = 0.0; // fastest any of its skills can go
  bool boundary_contact = false;  // clamped during its last update
  std::optional<std::string> last_event;  // emitted during the previous tick
  std::optional<std::string> airborne_skill;  // jump in progress

  const std::string& alo_name() const { return alo.name; }
  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Snapshot {
  std::int64_t tick = 0;
  std::string entity;
  Vec3 position;
  Vec3 velocity;
  double heading = 0.0;
  std::string skill;  // "idle" when nothing ran
  std::optional<Primitive> primitive;
  std::string state;  // manager state after the update
  bool boundary_contact = false;
  double nearest_distance = std::numeric_limits<double>::infinity();
  std::optional<Vec3> threat;        // position the entity fled from
  std::optional<std::string> rule;   // interaction rule that fired
  std::optional<std::string> event;  // event emitted this tick
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Trace {
  std::vector<StepObject> steps;
  std::vector<Snapshot> snapshots;

  // One JSON object per line; see docs/trace-format.md.
  std::string steps_jsonl() const;
  std::string snapshots_jsonl() const;
  friend bool operator==(const Trace&, const Trace&) = default;
};

nlohmann::json to_json(const Snapshot& s);

class World {
 public:
  // Throws Error{DegenerateBounds} unless min < max on every axis.
  static World spawn(Bounds bounds = {}, std::uint64_t seed = 0);

  // Throws Error{InvalidALO} or Error{OutOfBounds}. Returns the entity id.
  std::string add_entity(const ALO& alo, Vec3 position);

  // Both ALOs must have entities; the responder's ALO must own the skill.
  // Throws Error{UnknownName} or Error{MissingResponseSkill}.
  void bind_interaction(const InteractionRule& rule);

  // Throws Error{PreconditionFailed} unless dt > 0 and finite.
  void step(double dt = kDefaultDt);

  // Steps n times and returns the records produced by those steps.
  Trace run(std::int64_t ticks, double dt = kDefaultDt);

  const Bounds& bounds() const { return bounds_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t tick() const { return tick_; }
  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<InteractionRule>& rules() const { return rules_; }
  const Trace& trace() const { return trace_; }

  friend bool operator==(const World& a, const World& b) {
    return a.bounds_ == b.bounds_ && a.seed_ == b.seed_ && a.tick_ == b.tick_ && a.entities_ == b.entities_ &&
           a.rules_ == b.rules_ && a.trace_ == b.trace_ && a.rng_ == b.rng_;
  }

 private:
  World(Bounds bounds, std::uint64_t seed) : bounds_(bounds), seed_(seed), rng_(seed) {}
  void update(std::size_t index, double dt, std::vector<std::optional<std::string>>& emitted);

  Bounds bounds_;
  std::uint64_t seed_ = 0;
  std::int64_t tick_ = 0;
  std::vector<Entity> entities_;
  std::vector<InteractionRule> rules_;
  Trace trace_;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Scenario files

struct Placement {
  std::string alo;
  Vec3 position;
};

struct Scenario {
  Bounds bounds;
  std::uint64_t seed = 0;
  double dt = kDefaultDt;
  std::vector<Placement> entities;
  // Pair ALOs whose interaction rules are bound. Empty means every
  // registered rule whose two ALOs are both placed.
  std::vector<std::string> interactions;
};

// Throws Error{InvalidRequest} for missing or mistyped fields.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

// Places every entity and binds the selected rules. Throws Error{UnknownName}
// for names missing from the registry, plus World's own errors.
World build_world(const Registry& reg, const Scenario& s);

// Rules build_world binds for this scenario, in registry name order.
std::vector<InteractionRule> scenario_rules(const Registry& reg, const Scenario& s);

}  // namespace alo::sim
