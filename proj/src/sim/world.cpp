#include <algorithm>
#include <cmath>
#include <numbers>

#include "alo/sim.hpp"

namespace alo::sim {

namespace {

struct Senses {
  double nearest_distance = std::numeric_limits<double>::infinity();
  std::size_t nearest = SIZE_MAX;
  bool boundary_contact = false;
  std::string heard = "none";
};

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <class T>
bool compare(const T& a, CompareOp op, const T& b) {
  switch (op) {
    case CompareOp::lt: return a < b;
    case CompareOp::le: return a <= b;
    case CompareOp::gt: return a > b;
    case CompareOp::ge: return a >= b;
    case CompareOp::eq: return a == b;
    case CompareOp::ne: return a != b;
  }
  return false;
}

bool compare_literal(const Literal& actual, CompareOp op, const Literal& wanted) {
  if (actual.index() != wanted.index()) return false;
  if (const double* a = std::get_if<double>(&actual)) return compare(*a, op, std::get<double>(wanted));
  if (const bool* a = std::get_if<bool>(&actual)) {
    return (op == CompareOp::eq || op == CompareOp::ne) && compare(*a, op, std::get<bool>(wanted));
  }
  const auto& a = std::get<std::string>(actual);
  return (op == CompareOp::eq || op == CompareOp::ne) && compare(a, op, std::get<std::string>(wanted));
}

std::optional<Literal> subject_value(const Entity& e, const Senses& senses, const std::string& subject) {
  if (subject == "state") return Literal{e.alo.manager.current_state};
  auto dot = subject.find('.');
  if (dot == std::string::npos) return std::nullopt;
  std::string head = subject.substr(0, dot), tail = subject.substr(dot + 1);
  if (head == "env") {
    if (tail == "nearest_distance") return Literal{senses.nearest_distance};
    if (tail == "boundary_contact") return Literal{senses.boundary_contact};
    if (tail == "heard") return Literal{senses.heard};
    return std::nullopt;
  }
  const StateVariable* var = e.alo.find_state(head, tail);
  if (!var) return std::nullopt;
  return std::visit(
      [](const auto& v) -> std::optional<Literal> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ScalarState>) return Literal{v.value};
        if constexpr (std::is_same_v<T, BooleanState>) return Literal{v.value};
        if constexpr (std::is_same_v<T, LabelState>) return Literal{v.value};
        return std::nullopt;  // vectors are not comparable
      },
      var->value);
}

bool holds(const Condition& c, const Entity& e, const Senses& senses) {
  if (c.always) return true;
  auto actual = subject_value(e, senses, c.subject);
  return actual && compare_literal(*actual, c.op, c.value);
}

double number(const SkillSpec& s, const char* key, double fallback) {
  auto it = s.parameters.find(key);
  if (it == s.parameters.end()) return fallback;
  const double* d = std::get_if<double>(&it->second);
  return d ? *d : fallback;
}

std::string label(const SkillSpec& s, const char* key) {
  auto it = s.parameters.find(key);
  if (it == s.parameters.end()) return {};
  const std::string* v = std::get_if<std::string>(&it->second);
  return v ? *v : std::string();
}

double entity_max_speed(const ALO& alo) {
  double m = 0.0;
  for (const auto& sub : alo.sub_objects)
    for (const auto& s : sub.skills) m = std::max(m, skill_max_speed(s));
  return m;
}

Vec3 heading_dir(double heading) { return {std::cos(heading), 0.0, std::sin(heading)}; }

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

}  // namespace

bool Bounds::contains(const Vec3& p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
}

World World::spawn(Bounds bounds, std::uint64_t seed) {
  if (!bounds.min.finite() || !bounds.max.finite() || !(bounds.min.x < bounds.max.x) ||
      !(bounds.min.y < bounds.max.y) || !(bounds.min.z < bounds.max.z))
    throw Error(ErrorCode::DegenerateBounds, "bounds must have positive extent on every axis");
  return World(bounds, seed);
}

std::string World::add_entity(const ALO& alo, Vec3 position) {
  if (auto report = validate(alo); !report.ok())
    throw Error(ErrorCode::InvalidALO, alo.name + ": " + report.to_string());
  if (!position.finite() || !bounds_.contains(position))
    throw Error(ErrorCode::OutOfBounds, alo.name + " placed outside the world bounds");
  std::size_t ordinal = 1;
  for (const auto& e : entities_)
    if (e.alo.name == alo.name) ++ordinal;
  Entity e;
  e.id = alo.name + "#" + std::to_string(ordinal);
  e.alo = alo;
  e.position = position;
  e.max_speed = entity_max_speed(alo);
  entities_.push_back(std::move(e));
  return entities_.back().id;
}

void World::bind_interaction(const InteractionRule& rule) {
  auto find = [&](const std::string& name) -> const Entity* {
    for (const auto& e : entities_)
      if (e.alo.name == name) return &e;
    return nullptr;
  };
  for (const auto* name : {&rule.first, &rule.second})
    if (!find(*name)) throw Error(ErrorCode::UnknownName, "rule " + rule.name + ": no entity of '" + *name + "'");
  if (!find(rule.responder_name())->alo.find_skill(rule.response_skill))
    throw Error(ErrorCode::MissingResponseSkill,
                "rule " + rule.name + ": " + rule.responder_name() + " has no skill '" + rule.response_skill + "'");
  if (!(rule.trigger_radius > 0.0) || !std::isfinite(rule.trigger_radius))
    throw Error(ErrorCode::PreconditionFailed, "rule " + rule.name + ": trigger radius must be > 0");
  rules_.push_back(rule);
}

void World::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::PreconditionFailed, "dt must be positive");
  std::vector<std::optional<std::string>> emitted(entities_.size());
  for (std::size_t i = 0; i < entities_.size(); ++i) update(i, dt, emitted);
  for (std::size_t i = 0; i < entities_.size(); ++i) entities_[i].last_event = emitted[i];
  ++tick_;
}

Trace World::run(std::int64_t ticks, double dt) {
  if (ticks < 0) throw Error(ErrorCode::PreconditionFailed, "tick count must be >= 0");
  std::size_t steps_before = trace_.steps.size(), snaps_before = trace_.snapshots.size();
  for (std::int64_t t = 0; t < ticks; ++t) step(dt);
  Trace delta;
  delta.steps.assign(trace_.steps.begin() + static_cast<std::ptrdiff_t>(steps_before), trace_.steps.end());
  delta.snapshots.assign(trace_.snapshots.begin() + static_cast<std::ptrdiff_t>(snaps_before),
                         trace_.snapshots.end());
  return delta;
}

void World::update(std::size_t index, double dt, std::vector<std::optional<std::string>>& emitted) {
  Entity& e = entities_[index];

  // 1. Sense.
  Senses senses;
  senses.boundary_contact = e.boundary_contact;
  double heard_distance = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < entities_.size(); ++j) {
    if (j == index) continue;
    double d = distance(e.position, entities_[j].position);
    if (d < senses.nearest_distance) {
      senses.nearest_distance = d;
      senses.nearest = j;
    }
    if (entities_[j].last_event && d < heard_distance) {
      heard_distance = d;
      senses.heard = *entities_[j].last_event;
    }
  }

  Snapshot snap;
  snap.tick = tick_;
  snap.entity = e.id;
  snap.nearest_distance = senses.nearest_distance;
  std::string note;
  const SkillSpec* skill = nullptr;
  std::optional<Vec3> threat;

  bool airborne = e.airborne_skill.has_value();
  if (airborne) {
    skill = e.alo.find_skill(*e.airborne_skill);
    note = "airborne";
  } else {
    // 2. Interaction rules, first match wins.
    for (const auto& rule : rules_) {
      if (e.alo.name != rule.responder_name()) continue;
      std::optional<std::size_t> trigger;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < entities_.size(); ++j) {
        if (j == index || entities_[j].alo.name != rule.trigger_name()) continue;
        double d = distance(e.position, entities_[j].position);
        if (d < rule.trigger_radius && d < best) {
          best = d;
          trigger = j;
        }
      }
      if (!trigger) continue;
      skill = e.alo.find_skill(rule.response_skill);
      threat = entities_[*trigger].position;
      snap.rule = rule.name;
      note = "interaction " + rule.name + " with " + entities_[*trigger].id;
      break;
    }
    // 3. Manager policy, first match wins; no match means idle.
    if (!skill) {
      const auto& policy = e.alo.manager.policy;
      for (std::size_t r = 0; r < policy.size(); ++r) {
        if (!holds(policy[r].condition, e, senses)) continue;
        skill = e.alo.find_skill(policy[r].skill);
        if (policy[r].next_state) e.alo.manager.current_state = *policy[r].next_state;
        note = "policy " + std::to_string(r + 1);
        break;
      }
      if (!skill) note = "no rule matched";
    }
  }

  // 4. Kinematics.
  Vec3 v{0.0, 0.0, 0.0};
  std::optional<std::string> event;
  if (skill) {
    switch (skill->primitive) {
      case Primitive::move:
        v = heading_dir(e.heading) * number(*skill, "speed", 0.0);
        break;
      case Primitive::rotate:
        e.heading = std::remainder(e.heading + number(*skill, "rate", 0.0) * dt, 2.0 * std::numbers::pi);
        break;
      case Primitive::wander: {
        double turn = number(*skill, "turn", 1.0);
        e.heading = std::remainder(e.heading + turn * (2.0 * unit(rng_) - 1.0) * dt, 2.0 * std::numbers::pi);
        v = heading_dir(e.heading) * number(*skill, "speed", 0.0);
        break;
      }
      case Primitive::flee: {
        if (!threat && senses.nearest != SIZE_MAX && senses.nearest_distance < number(*skill, "radius", 0.0))
          threat = entities_[senses.nearest].position;
        if (!threat) break;
        Vec3 away = e.position - *threat;
        away.y = 0.0;
        double len = away.norm();
        if (len > 0.0) e.heading = std::atan2(away.z, away.x);
        v = heading_dir(e.heading) * number(*skill, "speed", 0.0);
        if (len == 0.0) threat.reset();  // no direction to flee from
        break;
      }
      case Primitive::seek: {
        std::string target = label(*skill, "target");
        std::optional<std::size_t> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < entities_.size(); ++j) {
          if (j == index || entities_[j].alo.name != target) continue;
          double d = distance(e.position, entities_[j].position);
          if (d < best_d) {
            best_d = d;
            best = j;
          }
        }
        if (!best) break;
        Vec3 toward = entities_[*best].position - e.position;
        toward.y = 0.0;
        double len = toward.norm();
        if (len == 0.0) break;
        e.heading = std::atan2(toward.z, toward.x);
        double stride = std::min(number(*skill, "speed", 0.0) * dt, len);
        v = heading_dir(e.heading) * (stride / dt);
        break;
      }
      case Primitive::jump: {
        double launch = std::sqrt(2.0 * kGravity * number(*skill, "height", 0.0));
        if (!airborne) {
          e.airborne_skill = skill->name;
          v.y = launch;
        } else {
          v.y = std::max(e.velocity.y - kGravity * dt, -launch);
        }
        break;
      }
      case Primitive::emit:
        event = label(*skill, "event");
        break;
      case Primitive::idle:
        break;
    }
  }
  if (e.airborne_skill && !skill) e.airborne_skill.reset();

  // Speed cap guards against rounding in the primitives above.
  if (double speed = v.norm(); speed > e.max_speed && speed > 0.0) v = v * (e.max_speed / speed);

  Vec3 p = e.position + v * dt;
  if (e.airborne_skill && p.y <= bounds_.min.y) {
    p.y = bounds_.min.y;  // landed
    v.y = 0.0;
    e.airborne_skill.reset();
  }

  // 5. Clamp, zeroing the velocity normal to any face touched.
  bool contact = false;
  auto clamp_axis = [&](double& pos, double& vel, double lo, double hi) {
    if (pos < lo) {
      pos = lo;
      vel = 0.0;
      contact = true;
    } else if (pos > hi) {
      pos = hi;
      vel = 0.0;
      contact = true;
    }
  };
  clamp_axis(p.x, v.x, bounds_.min.x, bounds_.max.x);
  clamp_axis(p.y, v.y, bounds_.min.y, bounds_.max.y);
  clamp_axis(p.z, v.z, bounds_.min.z, bounds_.max.z);

  e.position = p;
  e.velocity = v;
  e.boundary_contact = contact;
  e.active_skill = skill ? std::optional<std::string>(skill->name) : std::nullopt;
  if (event) emitted[index] = event;

  // 6. Log.
  snap.position = p;
  snap.velocity = v;
  snap.heading = e.heading;
  snap.skill = skill ? skill->name : "idle";
  if (skill) snap.primitive = skill->primitive;
  snap.state = e.alo.manager.current_state;
  snap.boundary_contact = contact;
  snap.threat = threat;
  snap.event = event;
  if (event) note += "; emit " + *event;
  trace_.snapshots.push_back(std::move(snap));

  StepObject step;
  step.index = static_cast<std::int64_t>(trace_.steps.size());
  step.tick = tick_;
  step.actor = e.id;
  step.skill = skill ? skill->name : "idle";
  step.resulting_state = e.alo.manager.current_state;
  step.note = note;
  trace_.steps.push_back(std::move(step));
}

}  // namespace alo::sim
