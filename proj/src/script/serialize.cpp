#include <charconv>

#include "alo/script.hpp"

namespace alo::script {

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

namespace {

std::string literal_text(const Literal& v) {
  if (const double* d = std::get_if<double>(&v)) return format_number(*d);
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "yes" : "no";
  return std::get<std::string>(v);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string state_text(const StateVariable& var) {
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ScalarState>) {
          std::string t = "scalar in [" + format_number(s.min) + ", " + format_number(s.max) +
                          "] = " + format_number(s.value);
          if (!s.unit.empty()) t += " " + s.unit;
          return t;
        } else if constexpr (std::is_same_v<T, BooleanState>) {
          return std::string("boolean = ") + (s.value ? "yes" : "no");
        } else if constexpr (std::is_same_v<T, LabelState>) {
          return "label {" + join(s.domain, ", ") + "} = " + s.value;
        } else {
          return "vector3 = (" + format_number(s.value.x) + ", " + format_number(s.value.y) +
                 ", " + format_number(s.value.z) + ")";
        }
      },
      var.value);
}

std::string skill_text(const SkillSpec& skill) {
  std::vector<std::string> params;
  for (const auto& [k, v] : skill.parameters) {
    if (const double* d = std::get_if<double>(&v))
      params.push_back(k + "=" + format_number(*d));
    else
      params.push_back(k + "=" + std::get<std::string>(v));
  }
  std::string t = skill.name + ": " + std::string(to_string(skill.primitive)) + "(" +
                  join(params, ", ") + ")";
  if (!skill.note.empty()) t += " # " + skill.note;
  return t;
}

}  // namespace

std::string condition_text(const Condition& c) {
  if (c.always) return "always";
  return "when " + c.subject + " " + std::string(to_string(c.op)) + " " + literal_text(c.value);
}

std::string serialize(const ALO& alo) {
  std::string out;
  auto line = [&](std::string_view s) {
    out += s;
    out += '\n';
  };

  line("# ALO: " + alo.name);
  line("");
  line("## subObjList");
  for (const auto& sub : alo.sub_objects) {
    line("");
    line("### " + sub.name);
    line("- skills:");
    for (const auto& s : sub.skills) line("  - " + skill_text(s));
    line("- knowledge:");
    for (const auto& k : sub.knowledge) line("  - " + k);
    line("- states:");
    for (const auto& [name, var] : sub.states) line("  - " + name + ": " + state_text(var));
  }

  line("");
  line("## managerObj");
  const auto& m = alo.manager;
  line("- currentState: " + m.current_state);
  line(m.state_set.empty() ? std::string("- stateSet:") : "- stateSet: " + join(m.state_set, ", "));
  line("- rewardAccumulator: " + format_number(m.reward_accumulator));
  line("- policy:");
  for (const auto& rule : m.policy) {
    std::string t = "  - " + condition_text(rule.condition) + " -> " + rule.skill;
    if (rule.next_state) t += " => " + *rule.next_state;
    line(t);
  }

  line("");
  line("## stepObjList");
  for (const auto& s : alo.steps) {
    std::string t = "- " + std::to_string(s.index) + " | " + std::to_string(s.tick) + " | " +
                    s.actor + " | " + s.skill + " | " + s.resulting_state + " |";
    if (!s.note.empty()) t += " " + s.note;
    line(t);
  }

  line("");
  line("## interactions");
  for (const auto& r : alo.interactions) {
    line("- " + r.name + ": pair(" + r.first + ", " + r.second +
         ") radius=" + format_number(r.trigger_radius) +
         " responder=" + (r.responder == Responder::first ? "first" : "second") +
         " skill=" + r.response_skill);
  }
  return out;
}

}  // namespace alo::script
