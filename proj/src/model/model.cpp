#include "alo/model.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace alo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyName: return "EmptyName";
    case ErrorCode::InvalidName: return "InvalidName";
    case ErrorCode::DuplicateSubObject: return "DuplicateSubObject";
    case ErrorCode::DanglingSkillReference: return "DanglingSkillReference";
    case ErrorCode::InvalidALO: return "InvalidALO";
    case ErrorCode::CrossReferenceBroken: return "CrossReferenceBroken";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::CorruptEntry: return "CorruptEntry";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::NoTableFound: return "NoTableFound";
    case ErrorCode::RaggedRow: return "RaggedRow";
    case ErrorCode::HttpError: return "HttpError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::DegenerateBounds: return "DegenerateBounds";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::MissingResponseSkill: return "MissingResponseSkill";
    case ErrorCode::UnsupportedDialect: return "UnsupportedDialect";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::TrialFailed: return "TrialFailed";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

namespace {

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '-'; }

// One line of text without surrounding whitespace; the markdown form trims.
bool clean_line(std::string_view s) {
  if (s.find_first_of("\r\n") != std::string_view::npos) return false;
  if (s.empty()) return true;
  auto ws = [](char c) { return c == ' ' || c == '\t'; };
  return !ws(s.front()) && !ws(s.back());
}

bool parses_as_number(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s.front())) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

bool is_alo_name(std::string_view s) {
  if (s.empty() || s.front() == ' ' || s.back() == ' ') return false;
  if (!(ident_char(s.front()) && s.front() != '-')) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == ' ') {
      if (s[i - 1] == ' ') return false;
      continue;
    }
    if (!ident_char(c)) return false;
  }
  return true;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::authored: return "authored";
    case Provenance::llm_generated: return "llm-generated";
    case Provenance::derived: return "derived";
  }
  return "authored";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  if (s == "authored") return Provenance::authored;
  if (s == "llm-generated") return Provenance::llm_generated;
  if (s == "derived") return Provenance::derived;
  return std::nullopt;
}

StateKind kind_of(const StateVariable& v) { return static_cast<StateKind>(v.value.index()); }

std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::scalar: return "scalar";
    case StateKind::boolean: return "boolean";
    case StateKind::label: return "label";
    case StateKind::vector3: return "vector3";
  }
  return "scalar";
}

std::string_view to_string(Primitive p) {
  switch (p) {
    case Primitive::move: return "move";
    case Primitive::rotate: return "rotate";
    case Primitive::jump: return "jump";
    case Primitive::emit: return "emit";
    case Primitive::wander: return "wander";
    case Primitive::flee: return "flee";
    case Primitive::seek: return "seek";
    case Primitive::idle: return "idle";
  }
  return "idle";
}

std::optional<Primitive> primitive_from_string(std::string_view s) {
  static constexpr Primitive all[] = {Primitive::move, Primitive::rotate, Primitive::jump,
                                      Primitive::emit, Primitive::wander, Primitive::flee,
                                      Primitive::seek, Primitive::idle};
  for (Primitive p : all)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

namespace {

std::optional<double> number_param(const SkillSpec& s, const std::string& key) {
  auto it = s.parameters.find(key);
  if (it == s.parameters.end()) return std::nullopt;
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  return std::nullopt;
}

}  // namespace

double skill_max_speed(const SkillSpec& s) {
  switch (s.primitive) {
    case Primitive::move:
    case Primitive::wander:
    case Primitive::flee:
    case Primitive::seek:
      return number_param(s, "speed").value_or(0.0);
    case Primitive::jump:
      return std::sqrt(2.0 * kGravity * number_param(s, "height").value_or(0.0));
    default:
      return 0.0;
  }
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::eq: return "==";
    case CompareOp::ne: return "!=";
  }
  return "==";
}

std::optional<CompareOp> compare_op_from_string(std::string_view s) {
  if (s == "<") return CompareOp::lt;
  if (s == "<=") return CompareOp::le;
  if (s == ">") return CompareOp::gt;
  if (s == ">=") return CompareOp::ge;
  if (s == "==") return CompareOp::eq;
  if (s == "!=") return CompareOp::ne;
  return std::nullopt;
}

std::optional<StateKind> env_variable_kind(std::string_view name) {
  if (name == "nearest_distance") return StateKind::scalar;
  if (name == "boundary_contact") return StateKind::boolean;
  if (name == "heard") return StateKind::label;
  return std::nullopt;
}

const SkillSpec* ALO::find_skill(std::string_view skill) const {
  for (const auto& sub : sub_objects)
    for (const auto& s : sub.skills)
      if (s.name == skill) return &s;
  return nullptr;
}

const StateVariable* ALO::find_state(std::string_view sub, std::string_view state) const {
  for (const auto& so : sub_objects) {
    if (so.name != sub) continue;
    auto it = so.states.find(std::string(state));
    return it == so.states.end() ? nullptr : &it->second;
  }
  return nullptr;
}

bool structurally_equal(const ALO& a, const ALO& b) {
  return a.name == b.name && a.sub_objects == b.sub_objects && a.manager == b.manager &&
         a.steps == b.steps && a.interactions == b.interactions;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].code << " at " << violations[i].path;
    if (!violations[i].message.empty()) out << " (" << violations[i].message << ")";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

class Checker {
 public:
  explicit Checker(const ALO& alo) : alo_(alo) {}

  ValidationReport run() {
    check_name();
    std::set<std::string> sub_names;
    for (std::size_t i = 0; i < alo_.sub_objects.size(); ++i) {
      const auto& sub = alo_.sub_objects[i];
      std::string path = "subObjList[" + std::to_string(i) + "]";
      if (!sub_names.insert(sub.name).second)
        add("DuplicateSubObject", path, "sub-object '" + sub.name + "' declared twice");
      check_sub(sub, path);
    }
    check_manager();
    check_steps();
    check_interactions();
    return std::move(report_);
  }

 private:
  void add(std::string code, std::string path, std::string message = {}) {
    report_.violations.push_back({std::move(code), std::move(path), std::move(message)});
  }

  void check_name() {
    if (alo_.name.empty())
      add("EmptyName", "name");
    else if (!is_alo_name(alo_.name))
      add("InvalidName", "name", "'" + alo_.name + "' is not a valid ALO name");
  }

  void check_sub(const SubObject& sub, const std::string& path) {
    if (!is_identifier(sub.name)) add("InvalidName", path + ".name", "'" + sub.name + "'");
    std::set<std::string> skill_names;
    for (std::size_t j = 0; j < sub.skills.size(); ++j) {
      const auto& skill = sub.skills[j];
      std::string sp = path + ".skills[" + std::to_string(j) + "]";
      if (!is_identifier(skill.name)) add("InvalidName", sp + ".name", "'" + skill.name + "'");
      if (!skill_names.insert(skill.name).second)
        add("DuplicateSkill", sp, "skill '" + skill.name + "' declared twice");
      check_skill(skill, sp);
    }
    for (std::size_t j = 0; j < sub.knowledge.size(); ++j) {
      const auto& fact = sub.knowledge[j];
      if (fact.empty() || !clean_line(fact))
        add("InvalidKnowledge", path + ".knowledge[" + std::to_string(j) + "]",
            "knowledge must be a single non-empty line");
    }
    for (const auto& [key, var] : sub.states) check_state(key, var, path + ".states." + key);
  }

  void check_skill(const SkillSpec& skill, const std::string& path) {
    auto positive = [&](const char* key) {
      auto it = skill.parameters.find(key);
      const double* d = it == skill.parameters.end() ? nullptr : std::get_if<double>(&it->second);
      if (!d)
        add("MissingParameter", path + ".parameters." + key,
            std::string(to_string(skill.primitive)) + " requires numeric " + key);
      else if (!(*d > 0.0) || !std::isfinite(*d))
        add("InvalidParameter", path + ".parameters." + key, key + std::string(" must be > 0"));
    };
    auto label = [&](const char* key) {
      auto it = skill.parameters.find(key);
      const std::string* s =
          it == skill.parameters.end() ? nullptr : std::get_if<std::string>(&it->second);
      if (!s) add("MissingParameter", path + ".parameters." + key,
                  std::string(to_string(skill.primitive)) + " requires label " + key);
    };
    switch (skill.primitive) {
      case Primitive::move: positive("speed"); break;
      case Primitive::wander: positive("speed"); break;
      case Primitive::flee: positive("radius"); positive("speed"); break;
      case Primitive::seek: positive("speed"); label("target"); break;
      case Primitive::jump: positive("height"); break;
      case Primitive::emit: label("event"); break;
      case Primitive::rotate: {
        auto it = skill.parameters.find("rate");
        const double* d = it == skill.parameters.end() ? nullptr : std::get_if<double>(&it->second);
        if (!d)
          add("MissingParameter", path + ".parameters.rate", "rotate requires numeric rate");
        else if (!std::isfinite(*d) || *d == 0.0)
          add("InvalidParameter", path + ".parameters.rate", "rate must be finite and non-zero");
        break;
      }
      case Primitive::idle: break;
    }
    for (const auto& [key, value] : skill.parameters) {
      std::string pp = path + ".parameters." + key;
      if (!is_identifier(key)) add("InvalidName", pp, "'" + key + "'");
      if (const double* d = std::get_if<double>(&value)) {
        if (!std::isfinite(*d)) add("InvalidParameter", pp, "non-finite value");
      } else {
        const auto& s = std::get<std::string>(value);
        if (!is_alo_name(s) || parses_as_number(s))
          add("InvalidParameter", pp, "label '" + s + "' is not a valid label");
      }
    }
    if (!clean_line(skill.note))
      add("InvalidParameter", path + ".note", "note must be a single line");
  }

  void check_state(const std::string& key, const StateVariable& var, const std::string& path) {
    if (key != var.name) add("StateKeyMismatch", path, "key '" + key + "' names '" + var.name + "'");
    if (!is_identifier(key)) add("InvalidName", path, "'" + key + "'");
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ScalarState>) {
            if (!std::isfinite(s.min) || !std::isfinite(s.max) || s.min > s.max)
              add("EmptyDomain", path, "scalar domain must be finite with min <= max");
            else if (!std::isfinite(s.value) || s.value < s.min || s.value > s.max)
              add("DomainExceeded", path, "value outside [min, max]");
            if (!s.unit.empty() && !is_identifier(s.unit))
              add("InvalidName", path + ".unit", "'" + s.unit + "'");
          } else if constexpr (std::is_same_v<T, LabelState>) {
            std::set<std::string> seen;
            for (const auto& l : s.domain) {
              if (!is_identifier(l) || l == "yes" || l == "no")
                add("InvalidName", path + ".domain", "label '" + l + "'");
              if (!seen.insert(l).second) add("DuplicateLabel", path + ".domain", l);
            }
            if (s.domain.empty())
              add("EmptyDomain", path, "label domain is empty");
            else if (!seen.count(s.value))
              add("DomainExceeded", path, "label '" + s.value + "' not in domain");
          } else if constexpr (std::is_same_v<T, Vector3State>) {
            if (!s.value.finite()) add("NonFiniteVector", path);
          }
        },
        var.value);
  }

  void check_condition(const Condition& c, const std::string& path) {
    if (c.always) return;
    std::optional<StateKind> kind;
    if (c.subject == "state") {
      kind = StateKind::label;
      if (const auto* s = std::get_if<std::string>(&c.value);
          s && std::find(alo_.manager.state_set.begin(), alo_.manager.state_set.end(), *s) ==
                   alo_.manager.state_set.end())
        add("UnknownManagerState", path, "condition compares against unknown state '" + *s + "'");
    } else if (auto dot = c.subject.find('.'); dot != std::string::npos) {
      std::string head = c.subject.substr(0, dot);
      std::string tail = c.subject.substr(dot + 1);
      if (head == "env") {
        kind = env_variable_kind(tail);
      } else if (const auto* var = alo_.find_state(head, tail)) {
        kind = kind_of(*var);
        if (const auto* lbl = std::get_if<LabelState>(&var->value)) {
          if (const auto* s = std::get_if<std::string>(&c.value);
              s && std::find(lbl->domain.begin(), lbl->domain.end(), *s) == lbl->domain.end())
            add("DomainExceeded", path, "label '" + *s + "' not in domain of " + c.subject);
        }
      }
    }
    if (!kind) {
      add("UnknownStateReference", path, "unknown subject '" + c.subject + "'");
      return;
    }
    bool ordered = c.op == CompareOp::lt || c.op == CompareOp::le || c.op == CompareOp::gt ||
                   c.op == CompareOp::ge;
    bool type_ok = false;
    switch (*kind) {
      case StateKind::scalar: type_ok = std::holds_alternative<double>(c.value); break;
      case StateKind::boolean: type_ok = std::holds_alternative<bool>(c.value) && !ordered; break;
      case StateKind::label:
        type_ok = std::holds_alternative<std::string>(c.value) && !ordered;
        break;
      case StateKind::vector3: type_ok = false; break;
    }
    if (!type_ok) add("TypeMismatch", path, "condition on '" + c.subject + "' has wrong type");
  }

  void check_manager() {
    const auto& m = alo_.manager;
    std::set<std::string> states;
    for (const auto& s : m.state_set) {
      if (!is_identifier(s)) add("InvalidName", "managerObj.stateSet", "'" + s + "'");
      if (!states.insert(s).second) add("DuplicateLabel", "managerObj.stateSet", s);
    }
    if (!states.count(m.current_state))
      add("UnknownManagerState", "managerObj.currentState",
          "'" + m.current_state + "' is not in stateSet");
    for (std::size_t i = 0; i < m.policy.size(); ++i) {
      const auto& rule = m.policy[i];
      std::string path = "managerObj.policy[" + std::to_string(i) + "]";
      if (!alo_.find_skill(rule.skill))
        add("DanglingSkillReference", path, "policy targets missing skill '" + rule.skill + "'");
      if (rule.next_state && !states.count(*rule.next_state))
        add("UnknownManagerState", path, "next state '" + *rule.next_state + "' not in stateSet");
      check_condition(rule.condition, path + ".condition");
    }
    if (!std::isfinite(m.reward_accumulator))
      add("InvalidParameter", "managerObj.rewardAccumulator", "non-finite");
  }

  void check_steps() {
    for (std::size_t i = 0; i < alo_.steps.size(); ++i) {
      const auto& s = alo_.steps[i];
      std::string path = "stepObjList[" + std::to_string(i) + "]";
      if (s.index != static_cast<std::int64_t>(i))
        add("StepIndexGap", path, "expected index " + std::to_string(i));
      if (s.tick < 0) add("InvalidParameter", path + ".tick", "negative tick");
      if (i > 0 && s.tick < alo_.steps[i - 1].tick) add("TickDecreasing", path);
      if (s.actor.empty() || !clean_line(s.actor) || s.actor.find('|') != std::string::npos)
        add("InvalidName", path + ".actor", "'" + s.actor + "'");
      if (!is_identifier(s.skill)) add("InvalidName", path + ".skill", "'" + s.skill + "'");
      if (!is_identifier(s.resulting_state))
        add("InvalidName", path + ".resultingState", "'" + s.resulting_state + "'");
      if (!clean_line(s.note))
        add("InvalidName", path + ".note", "note must be a single line");
    }
  }

  void check_interactions() {
    std::set<std::string> names;
    for (std::size_t i = 0; i < alo_.interactions.size(); ++i) {
      const auto& r = alo_.interactions[i];
      std::string path = "interactions[" + std::to_string(i) + "]";
      if (!is_identifier(r.name)) add("InvalidName", path + ".name", "'" + r.name + "'");
      if (!names.insert(r.name).second) add("DuplicateInteraction", path, r.name);
      if (!is_alo_name(r.first)) add("InvalidName", path + ".pair[0]", "'" + r.first + "'");
      if (!is_alo_name(r.second)) add("InvalidName", path + ".pair[1]", "'" + r.second + "'");
      if (!(r.trigger_radius > 0.0) || !std::isfinite(r.trigger_radius))
        add("InvalidParameter", path + ".triggerRadius", "must be > 0");
      if (!is_identifier(r.response_skill))
        add("InvalidName", path + ".responseSkill", "'" + r.response_skill + "'");
    }
  }

  const ALO& alo_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const ALO& alo) { return Checker(alo).run(); }

ALO new_alo(std::string name, std::vector<SubObject> subobjects, ManagerObject manager) {
  if (name.empty()) throw Error(ErrorCode::EmptyName, "ALO name must not be empty");
  if (!is_alo_name(name)) throw Error(ErrorCode::InvalidName, "invalid ALO name '" + name + "'");
  std::set<std::string> seen;
  for (const auto& sub : subobjects)
    if (!seen.insert(sub.name).second)
      throw Error(ErrorCode::DuplicateSubObject, "sub-object '" + sub.name + "' declared twice");

  ALO alo;
  alo.name = std::move(name);
  alo.sub_objects = std::move(subobjects);
  alo.manager = std::move(manager);
  alo.provenance = Provenance::authored;

  ValidationReport report = validate(alo);
  for (const auto& v : report.violations)
    if (v.code == "DanglingSkillReference")
      throw Error(ErrorCode::DanglingSkillReference, v.message);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return alo;
}

void append_step(ALO& alo, StepObject step) {
  if (!alo.steps.empty() && step.tick < alo.steps.back().tick)
    throw Error(ErrorCode::PreconditionFailed, "step tick must be non-decreasing");
  step.index = static_cast<std::int64_t>(alo.steps.size());
  alo.steps.push_back(std::move(step));
}

}  // namespace alo
