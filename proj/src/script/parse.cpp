#include <charconv>
#include <optional>
#include <set>

#include "alo/script.hpp"
#include "text.hpp"

namespace alo::script {

using namespace detail;

namespace {

// Numbers must start like one, so labels such as "inf" or "nan" stay labels.
std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  char c = s.front();
  if (!((c >= '0' && c <= '9') || c == '-' || c == '.')) return std::nullopt;
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

Literal parse_literal(std::string_view s) {
  if (s == "yes") return true;
  if (s == "no") return false;
  if (auto d = parse_number(s)) return *d;
  return std::string(s);
}

enum class Section { none, sub_objects, manager, steps, interactions };

class Parser {
 public:
  explicit Parser(std::string_view text) : lines_(split_lines(text)) {}

  ALO run() {
    std::size_t i = 0;
    while (i < lines_.size() && trim(lines_[i]).empty()) ++i;
    if (i == lines_.size()) fail(i + 1, "# ALO:");
    Heading title = parse_heading(lines_[i]);
    if (title.depth != 1 || !is_title_text(title.text)) fail(i + 1, "# ALO:");
    alo_.name = std::string(trim(title.text.substr(4)));
    alo_.provenance = Provenance::llm_generated;

    for (++i; i < lines_.size(); ++i) {
      line_no_ = i + 1;
      std::string_view raw = lines_[i];
      std::string_view t = trim(raw);
      if (t.empty()) continue;
      if (Heading h = parse_heading(raw); h.depth > 0) {
        heading(h);
      } else if (raw.substr(0, 2) == "- ") {
        key_line(trim(raw.substr(2)));
      } else if (is_space(raw.front()) && t.substr(0, 2) == "- ") {
        item_line(trim(t.substr(2)));
      } else if (t == "-") {
        fail(line_no_, "list item text");
      } else {
        fail(line_no_, "heading or list item");
      }
    }
    if (!seen_.count(Section::manager)) fail(lines_.size() + 1, "## managerObj");
    if (!have_current_state_) fail(lines_.size() + 1, "- currentState: <state>");
    return std::move(alo_);
  }

 private:
  [[noreturn]] static void fail(std::size_t line, std::string expected) {
    throw ParseError(line, std::move(expected));
  }

  void heading(const Heading& h) {
    if (h.depth == 2) {
      std::string_view name = h.text;
      Section s = name == "subObjList"     ? Section::sub_objects
                  : name == "managerObj"   ? Section::manager
                  : name == "stepObjList"  ? Section::steps
                  : name == "interactions" ? Section::interactions
                                           : Section::none;
      if (s == Section::none) fail(line_no_, "## subObjList | managerObj | stepObjList | interactions");
      if (!seen_.insert(s).second) fail(line_no_, "each section at most once");
      section_ = s;
      sub_ = nullptr;
      key_.clear();
      manager_keys_.clear();
      return;
    }
    if (h.depth == 3 && section_ == Section::sub_objects) {
      alo_.sub_objects.push_back(SubObject{std::string(h.text), {}, {}, {}});
      sub_ = &alo_.sub_objects.back();
      key_.clear();
      sub_keys_.clear();
      return;
    }
    fail(line_no_, section_ == Section::sub_objects ? "### <sub-object>" : "## <section>");
  }

  void key_line(std::string_view body) {
    switch (section_) {
      case Section::none: fail(line_no_, "## <section>");
      case Section::sub_objects: {
        if (!sub_) fail(line_no_, "### <sub-object>");
        if (body != "skills:" && body != "knowledge:" && body != "states:")
          fail(line_no_, "- skills: | - knowledge: | - states:");
        key_ = std::string(body.substr(0, body.size() - 1));
        if (!sub_keys_.insert(key_).second) fail(line_no_, "each key at most once");
        return;
      }
      case Section::manager: manager_line(body); return;
      case Section::steps: step_line(body); return;
      case Section::interactions: interaction_line(body); return;
    }
  }

  void item_line(std::string_view body) {
    if (section_ == Section::sub_objects && sub_ && !key_.empty()) {
      if (key_ == "skills")
        sub_->skills.push_back(skill(body));
      else if (key_ == "knowledge")
        sub_->knowledge.emplace_back(body);
      else
        state(body);
      return;
    }
    if (section_ == Section::manager && key_ == "policy") {
      policy_rule(body);
      return;
    }
    fail(line_no_, "key line before list items");
  }

  // name: primitive(k=v, ...) [# note]
  SkillSpec skill(std::string_view body) {
    SkillSpec s;
    auto colon = body.find(':');
    if (colon == std::string_view::npos) fail(line_no_, "<skill>: <primitive>(<params>)");
    s.name = std::string(trim(body.substr(0, colon)));
    std::string_view rest = trim(body.substr(colon + 1));
    std::string_view prim = rest;
    std::string_view params;
    std::string_view after;
    if (auto open = rest.find('('); open != std::string_view::npos) {
      auto close = rest.find(')', open);
      if (close == std::string_view::npos) fail(line_no_, "')' closing skill parameters");
      prim = trim(rest.substr(0, open));
      params = trim(rest.substr(open + 1, close - open - 1));
      after = trim(rest.substr(close + 1));
    } else if (auto hash = rest.find(" #"); hash != std::string_view::npos) {
      prim = trim(rest.substr(0, hash));
      after = trim(rest.substr(hash));
    }
    if (!after.empty()) {
      if (after.front() != '#') fail(line_no_, "'# <note>' after skill parameters");
      s.note = std::string(trim(after.substr(1)));
    }
    if (auto p = primitive_from_string(prim)) {
      s.primitive = *p;
    } else {
      s.primitive = Primitive::idle;
      std::string original = "unknown primitive: " + std::string(prim);
      s.note = s.note.empty() ? original : original + "; " + s.note;
    }
    if (!params.empty()) {
      for (const auto& kv : split(params, ',')) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) fail(line_no_, "<param>=<value>");
        std::string key(trim(std::string_view(kv).substr(0, eq)));
        std::string_view value = trim(std::string_view(kv).substr(eq + 1));
        if (!s.parameters.emplace(key, ParamValue{}).second)
          fail(line_no_, "unique parameter names");
        if (auto d = parse_number(value))
          s.parameters[key] = *d;
        else
          s.parameters[key] = std::string(value);
      }
    }
    return s;
  }

  void state(std::string_view body) {
    auto colon = body.find(':');
    if (colon == std::string_view::npos) fail(line_no_, "<state>: <kind> ...");
    StateVariable var;
    var.name = std::string(trim(body.substr(0, colon)));
    std::string_view decl = trim(body.substr(colon + 1));
    auto eq = decl.find('=');
    if (eq == std::string_view::npos) fail(line_no_, "'= <value>' in state declaration");
    std::string_view type = trim(decl.substr(0, eq));
    std::string_view value = trim(decl.substr(eq + 1));

    if (type.substr(0, 6) == "scalar") {
      std::string_view dom = trim(type.substr(6));
      if (dom.substr(0, 2) != "in") fail(line_no_, "scalar in [<min>, <max>]");
      dom = trim(dom.substr(2));
      if (dom.size() < 2 || dom.front() != '[' || dom.back() != ']')
        fail(line_no_, "scalar in [<min>, <max>]");
      auto bounds = split(dom.substr(1, dom.size() - 2), ',');
      if (bounds.size() != 2) fail(line_no_, "scalar in [<min>, <max>]");
      ScalarState s;
      auto lo = parse_number(bounds[0]);
      auto hi = parse_number(bounds[1]);
      if (!lo || !hi) fail(line_no_, "numeric scalar bounds");
      s.min = *lo;
      s.max = *hi;
      auto space = value.find(' ');
      auto v = parse_number(value.substr(0, space));
      if (!v) fail(line_no_, "numeric scalar value");
      s.value = *v;
      if (space != std::string_view::npos) s.unit = std::string(trim(value.substr(space)));
      var.value = s;
    } else if (type == "boolean") {
      if (value != "yes" && value != "no") fail(line_no_, "boolean value yes | no");
      var.value = BooleanState{value == "yes"};
    } else if (type.substr(0, 5) == "label") {
      std::string_view dom = trim(type.substr(5));
      if (dom.size() < 2 || dom.front() != '{' || dom.back() != '}')
        fail(line_no_, "label {<a>, <b>, ...}");
      LabelState s;
      std::string_view inner = trim(dom.substr(1, dom.size() - 2));
      if (!inner.empty()) s.domain = split(inner, ',');
      s.value = std::string(value);
      var.value = s;
    } else if (type == "vector3") {
      if (value.size() < 2 || value.front() != '(' || value.back() != ')')
        fail(line_no_, "vector3 = (<x>, <y>, <z>)");
      auto parts = split(value.substr(1, value.size() - 2), ',');
      if (parts.size() != 3) fail(line_no_, "vector3 = (<x>, <y>, <z>)");
      Vec3 v;
      double* dst[] = {&v.x, &v.y, &v.z};
      for (int k = 0; k < 3; ++k) {
        auto d = parse_number(parts[k]);
        if (!d) fail(line_no_, "numeric vector3 component");
        *dst[k] = *d;
      }
      var.value = Vector3State{v};
    } else {
      fail(line_no_, "state kind scalar | boolean | label | vector3");
    }
    std::string key = var.name;
    if (!sub_->states.emplace(key, std::move(var)).second) fail(line_no_, "unique state names");
  }

  void manager_line(std::string_view body) {
    auto colon = body.find(':');
    if (colon == std::string_view::npos) fail(line_no_, "<key>: <value> in managerObj");
    std::string key(trim(body.substr(0, colon)));
    std::string_view value = trim(body.substr(colon + 1));
    if (!manager_keys_.insert(key).second) fail(line_no_, "each key at most once");
    auto& m = alo_.manager;
    key_.clear();
    if (key == "currentState") {
      m.current_state = std::string(value);
      have_current_state_ = true;
    } else if (key == "stateSet") {
      m.state_set.clear();
      if (!value.empty()) m.state_set = split(value, ',');
    } else if (key == "rewardAccumulator") {
      auto d = parse_number(value);
      if (!d) fail(line_no_, "numeric rewardAccumulator");
      m.reward_accumulator = *d;
    } else if (key == "policy") {
      if (!value.empty()) fail(line_no_, "policy rules as list items");
      key_ = "policy";
    } else {
      fail(line_no_, "currentState | stateSet | rewardAccumulator | policy");
    }
  }

  // always -> skill [=> next] | when <subject> <op> <literal> -> skill [=> next]
  void policy_rule(std::string_view body) {
    auto arrow = body.find(" -> ");
    if (arrow == std::string_view::npos) fail(line_no_, "<condition> -> <skill>");
    PolicyRule rule;
    std::string_view cond = trim(body.substr(0, arrow));
    std::string_view target = trim(body.substr(arrow + 4));
    if (auto next = target.find(" => "); next != std::string_view::npos) {
      rule.next_state = std::string(trim(target.substr(next + 4)));
      target = trim(target.substr(0, next));
    }
    rule.skill = std::string(target);
    if (cond == "always") {
      rule.condition.always = true;
    } else {
      if (cond.substr(0, 5) != "when ") fail(line_no_, "always | when <subject> <op> <value>");
      auto parts = split(trim(cond.substr(5)), ' ');
      if (parts.size() != 3) fail(line_no_, "when <subject> <op> <value>");
      auto op = compare_op_from_string(parts[1]);
      if (!op) fail(line_no_, "comparison operator < <= > >= == !=");
      rule.condition.always = false;
      rule.condition.subject = parts[0];
      rule.condition.op = *op;
      rule.condition.value = parse_literal(parts[2]);
    }
    alo_.manager.policy.push_back(std::move(rule));
  }

  // <index> | <tick> | <actor> | <skill> | <state> | <note>
  void step_line(std::string_view body) {
    std::vector<std::string_view> f;
    std::string_view rest = body;
    for (int k = 0; k < 5; ++k) {
      auto bar = rest.find('|');
      if (bar == std::string_view::npos) fail(line_no_, "<index> | <tick> | <actor> | <skill> | <state> | <note>");
      f.push_back(trim(rest.substr(0, bar)));
      rest = rest.substr(bar + 1);
    }
    StepObject s;
    auto idx = parse_int(f[0]);
    auto tick = parse_int(f[1]);
    if (!idx || !tick) fail(line_no_, "integer step index and tick");
    s.index = *idx;
    s.tick = *tick;
    s.actor = std::string(f[2]);
    s.skill = std::string(f[3]);
    s.resulting_state = std::string(f[4]);
    s.note = std::string(trim(rest));
    alo_.steps.push_back(std::move(s));
  }

  // <name>: pair(<a>, <b>) radius=<r> responder=<first|second> skill=<skill>
  void interaction_line(std::string_view body) {
    constexpr const char* form = "<name>: pair(<a>, <b>) radius=<r> responder=<first|second> skill=<skill>";
    auto colon = body.find(':');
    auto open = body.find("pair(");
    auto close = body.find(')', open);
    if (colon == std::string_view::npos || open == std::string_view::npos ||
        close == std::string_view::npos || open < colon)
      fail(line_no_, form);
    InteractionRule r;
    r.name = std::string(trim(body.substr(0, colon)));
    auto pair = split(body.substr(open + 5, close - open - 5), ',');
    if (pair.size() != 2) fail(line_no_, form);
    r.first = pair[0];
    r.second = pair[1];
    bool radius = false, responder = false, skill = false;
    for (const auto& kv : split(trim(body.substr(close + 1)), ' ')) {
      if (kv.empty()) continue;
      auto eq = kv.find('=');
      if (eq == std::string::npos) fail(line_no_, form);
      std::string_view k = std::string_view(kv).substr(0, eq);
      std::string_view v = std::string_view(kv).substr(eq + 1);
      if (k == "radius") {
        auto d = parse_number(v);
        if (!d) fail(line_no_, "numeric radius");
        r.trigger_radius = *d;
        radius = true;
      } else if (k == "responder") {
        if (v != "first" && v != "second") fail(line_no_, "responder=first | second");
        r.responder = v == "first" ? Responder::first : Responder::second;
        responder = true;
      } else if (k == "skill") {
        r.response_skill = std::string(v);
        skill = true;
      } else {
        fail(line_no_, form);
      }
    }
    if (!radius || !responder || !skill) fail(line_no_, form);
    alo_.interactions.push_back(std::move(r));
  }

  std::vector<std::string> lines_;
  std::size_t line_no_ = 0;
  ALO alo_;
  Section section_ = Section::none;
  std::set<Section> seen_;
  SubObject* sub_ = nullptr;
  std::string key_;
  std::set<std::string> sub_keys_;
  std::set<std::string> manager_keys_;
  bool have_current_state_ = false;
};

}  // namespace

ALO parse_canonical(std::string_view text) { return Parser(text).run(); }

ALO parse_alo_markdown(std::string_view text) {
  RepairResult fixed = repair(text);
  ALO alo = parse_canonical(fixed.text);
  ValidationReport report = validate(alo);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return alo;
}

}  // namespace alo::script
