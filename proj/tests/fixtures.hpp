#pragma once

// Hand-built ALOs and a random generator of valid ALOs for property tests.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alo/model.hpp"

namespace alo::testing {

inline StateVariable scalar(std::string name, double value, double lo, double hi,
                            std::string unit = {}) {
  return {name, ScalarState{value, lo, hi, std::move(unit)}};
}

inline StateVariable boolean(std::string name, bool value) { return {name, BooleanState{value}}; }

inline StateVariable label(std::string name, std::string value, std::vector<std::string> domain) {
  return {name, LabelState{std::move(value), std::move(domain)}};
}

inline SkillSpec skill(std::string name, Primitive p, std::map<std::string, ParamValue> params = {}) {
  return {std::move(name), p, std::move(params), {}};
}

inline Condition when(std::string subject, CompareOp op, Literal value) {
  return {false, std::move(subject), op, std::move(value)};
}

inline Condition always() { return {}; }

inline SubObject sub(std::string name, std::vector<SkillSpec> skills, std::vector<std::string> knowledge,
                     std::vector<StateVariable> states) {
  SubObject s{std::move(name), std::move(skills), std::move(knowledge), {}};
  for (auto& v : states) s.states.emplace(v.name, v);
  return s;
}

inline ALO cat() {
  return new_alo(
      "cat",
      {sub("body",
           {skill("pounce", Primitive::jump, {{"height", 1.2}}),
            skill("meow", Primitive::emit, {{"event", std::string("meow")}}),
            skill("chase", Primitive::seek, {{"speed", 8.0}, {"target", std::string("roomba")}}),
            skill("nap", Primitive::idle)},
           {"Cats always land on their feet.", "A cat meows to get attention."},
           {scalar("age", 15, 0, 30, "years"), scalar("energy", 80, 0, 100, "percent"),
            boolean("awake", true), label("mood", "playful", {"calm", "playful", "scared"})})},
      ManagerObject{"idle",
                    {"idle", "hunting", "resting"},
                    {{when("env.boundary_contact", CompareOp::eq, true), "meow", std::nullopt},
                     {when("body.energy", CompareOp::lt, 20.0), "nap", "resting"},
                     {always(), "chase", "hunting"}},
                    0.0});
}

inline ALO roomba() {
  return new_alo(
      "roomba",
      {sub("chassis",
           {skill("drive", Primitive::move, {{"speed", 5.0}}),
            skill("turn", Primitive::rotate, {{"rate", 1.5}}),
            skill("escape", Primitive::flee, {{"radius", 10.0}, {"speed", 10.0}}),
            skill("clean", Primitive::wander, {{"speed", 4.0}, {"turn", 1.0}})},
           {"A roomba vacuums the floor while wandering."},
           {scalar("battery", 90, 0, 100, "percent"), boolean("bin_full", false)})},
      ManagerObject{"cleaning",
                    {"cleaning", "escaping"},
                    {{when("env.boundary_contact", CompareOp::eq, true), "turn", std::nullopt},
                     {always(), "clean", "cleaning"}},
                    0.0});
}

inline InteractionRule avoid_rule(double radius = 10.0, std::string skill = "escape") {
  return {"avoid_cat", "cat", "roomba", radius, Responder::second, std::move(skill)};
}

inline ALO cat_meets_roomba() {
  ALO pair = new_alo("cat meets roomba",
                     {sub("encounter", {skill("observe", Primitive::idle)},
                          {"The roomba escapes when the cat comes close."}, {})},
                     ManagerObject{"apart", {"apart", "close"}, {{always(), "observe", std::nullopt}}, 0.0});
  pair.interactions.push_back(avoid_rule());
  return pair;
}

inline ALO printer() {
  return new_alo("printer",
                 {sub("specs", {},
                      {"Inkjet printer with automatic duplex printing."},
                      {scalar("print-speed", 15, 0, 60, "ppm"), scalar("dpi", 1200, 0, 4800)})},
                 ManagerObject{"idle", {"idle"}, {}, 0.0});
}

// ---------------------------------------------------------------------------

class AloGenerator {
 public:
  explicit AloGenerator(std::uint64_t seed) : rng_(seed) {}

  ALO next() {
    ALO alo;
    alo.name = alo_name();
    alo.provenance = static_cast<Provenance>(pick(3));
    std::size_t subs = pick(4);
    for (std::size_t i = 0; i < subs; ++i) {
      SubObject s;
      s.name = "sub" + std::to_string(i) + "_" + ident();
      std::size_t skills = pick(4);
      for (std::size_t j = 0; j < skills; ++j) s.skills.push_back(random_skill("sk" + std::to_string(j)));
      std::size_t facts = pick(3);
      for (std::size_t j = 0; j < facts; ++j) s.knowledge.push_back(fact());
      std::size_t states = pick(5);
      for (std::size_t j = 0; j < states; ++j) {
        auto v = random_state("st" + std::to_string(j) + ident());
        s.states.emplace(v.name, v);
      }
      alo.sub_objects.push_back(std::move(s));
    }
    std::size_t nstates = 1 + pick(3);
    for (std::size_t i = 0; i < nstates; ++i) alo.manager.state_set.push_back("m" + std::to_string(i) + ident());
    alo.manager.current_state = alo.manager.state_set[pick(nstates)];
    alo.manager.reward_accumulator = number();

    std::vector<std::string> skill_names;
    for (const auto& s : alo.sub_objects)
      for (const auto& k : s.skills) skill_names.push_back(k.name);
    if (!skill_names.empty()) {
      std::size_t rules = pick(4);
      for (std::size_t i = 0; i < rules; ++i) {
        PolicyRule r;
        r.skill = skill_names[pick(skill_names.size())];
        r.condition = random_condition(alo);
        if (pick(2)) r.next_state = alo.manager.state_set[pick(nstates)];
        alo.manager.policy.push_back(std::move(r));
      }
    }
    std::size_t steps = pick(4);
    std::int64_t tick = 0;
    for (std::size_t i = 0; i < steps; ++i) {
      tick += static_cast<std::int64_t>(pick(3));
      alo.steps.push_back({static_cast<std::int64_t>(i), tick, alo.name + "#" + std::to_string(pick(3)),
                           "sk" + ident(), alo.manager.state_set[pick(nstates)],
                           pick(2) ? fact() : std::string()});
    }
    std::size_t rules = pick(3);
    for (std::size_t i = 0; i < rules; ++i)
      alo.interactions.push_back({"rule" + std::to_string(i), alo_name(), alo_name(), 0.5 + pick(40),
                                  pick(2) ? Responder::first : Responder::second, "sk" + ident()});
    return alo;
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  double number() {
    switch (pick(6)) {
      case 0: return static_cast<double>(static_cast<int>(pick(2001)) - 1000);
      case 1: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng_);
      case 2: return std::uniform_real_distribution<double>(0, 1)(rng_) * 1e-7;
      case 3: return std::uniform_real_distribution<double>(0, 1)(rng_) * 1e21;
      case 4: return 0.1 * static_cast<double>(pick(100));
      default: return std::uniform_real_distribution<double>(-1, 1)(rng_);
    }
  }

  double positive() {
    double v = std::abs(number());
    return v > 0 ? v : 1.0;
  }

  std::string ident() {
    static const char* parts[] = {"a", "bo", "cat", "dri", "e_", "fo-o", "gra", "hu", "X", "z9"};
    std::string s;
    std::size_t n = 1 + pick(3);
    for (std::size_t i = 0; i < n; ++i) s += parts[pick(10)];
    return s;
  }

  std::string alo_name() {
    static const char* words[] = {"cat", "roomba", "3D", "world", "teacher", "Wi-Fi", "router_2", "x"};
    std::string s = words[pick(8)];
    std::size_t extra = pick(3);
    for (std::size_t i = 0; i < extra; ++i) s += std::string(" ") + words[pick(8)];
    return s;
  }

  std::string fact() {
    static const char* words[] = {"The", "cat", "jumps", "#", "->", "|", "over", "a:", "=", "(x)",
                                  "yes", "`code`", "50%", "- dash", "[1, 2]", "{b}"};
    std::string s = words[pick(16)];
    std::size_t extra = pick(8);
    for (std::size_t i = 0; i < extra; ++i) s += std::string(" ") + words[pick(16)];
    return s;
  }

 private:
  SkillSpec random_skill(std::string name) {
    SkillSpec s;
    s.name = std::move(name);
    s.primitive = static_cast<Primitive>(pick(8));
    switch (s.primitive) {
      case Primitive::move: s.parameters["speed"] = positive(); break;
      case Primitive::wander: s.parameters["speed"] = positive(); s.parameters["turn"] = positive(); break;
      case Primitive::flee:
        s.parameters["speed"] = positive();
        s.parameters["radius"] = positive();
        break;
      case Primitive::seek:
        s.parameters["speed"] = positive();
        s.parameters["target"] = alo_name();
        break;
      case Primitive::jump: s.parameters["height"] = positive(); break;
      case Primitive::emit: s.parameters["event"] = ident(); break;
      case Primitive::rotate: s.parameters["rate"] = positive() * (pick(2) ? 1 : -1); break;
      case Primitive::idle:
        if (pick(2)) s.note = "unknown primitive: " + ident();
        break;
    }
    if (pick(3) == 0) s.parameters["extra_" + ident()] = pick(2) ? ParamValue(number()) : ParamValue(alo_name());
    return s;
  }

  StateVariable random_state(std::string name) {
    switch (pick(4)) {
      case 0: {
        double a = number(), b = number();
        if (a > b) std::swap(a, b);
        double v = pick(3) == 0 ? a : (pick(2) ? b : a + (b - a) / 2);
        return {name, ScalarState{v, a, b, pick(2) ? ident() : std::string()}};
      }
      case 1: return {name, BooleanState{pick(2) == 1}};
      case 2: {
        std::vector<std::string> dom;
        std::size_t n = 1 + pick(3);
        for (std::size_t i = 0; i < n; ++i) dom.push_back("l" + std::to_string(i) + ident());
        return {name, LabelState{dom[pick(n)], dom}};
      }
      default: return {name, Vector3State{{number(), number(), number()}}};
    }
  }

  Condition random_condition(const ALO& alo) {
    switch (pick(5)) {
      case 0: return {};
      case 1: return {false, "env.nearest_distance", static_cast<CompareOp>(pick(6)), number()};
      case 2: return {false, "env.boundary_contact", pick(2) ? CompareOp::eq : CompareOp::ne, pick(2) == 1};
      case 3: return {false, "state", CompareOp::eq, alo.manager.state_set[pick(alo.manager.state_set.size())]};
      default:
        for (const auto& s : alo.sub_objects)
          for (const auto& [k, v] : s.states) {
            if (const auto* sc = std::get_if<ScalarState>(&v.value))
              return {false, s.name + "." + k, static_cast<CompareOp>(pick(6)), sc->value};
            if (const auto* lb = std::get_if<LabelState>(&v.value))
              return {false, s.name + "." + k, CompareOp::ne, lb->domain.front()};
          }
        return {};
    }
  }

  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------

inline std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

inline std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// Damages a canonical document the way chat models tend to.
inline std::string mutate(const std::string& canonical, AloGenerator& g) {
  auto lines = lines_of(canonical);
  std::size_t ops = 1 + g.pick(4);
  for (std::size_t k = 0; k < ops; ++k) {
    std::size_t at = lines.empty() ? 0 : g.pick(lines.size());
    switch (g.pick(9)) {
      case 0: lines.insert(lines.begin(), "Sure! Here is the ALO you asked for:"); break;
      case 1: lines.insert(lines.begin() + static_cast<long>(at), "This line is commentary."); break;
      case 2:
        if (!lines.empty() && lines[at].rfind("#", 0) == 0) lines[at] = "#" + lines[at];
        break;
      case 3:
        if (!lines.empty() && lines[at].rfind("- ", 0) == 0)
          lines.insert(lines.begin() + static_cast<long>(at) + 1, lines[at]);
        break;
      case 4:
        for (auto& l : lines) {
          auto p = l.find("= yes");
          if (p != std::string::npos) l.replace(p, 5, "= True");
        }
        break;
      case 5:
        lines.insert(lines.begin(), "```markdown");
        if (g.pick(2)) lines.push_back("```");
        break;
      case 6: lines.insert(lines.begin() + static_cast<long>(at), "## Notes"); break;
      case 7:
        if (!lines.empty()) lines.erase(lines.begin() + static_cast<long>(at));
        break;
      default:
        for (auto& l : lines)
          if (l == "## managerObj") l = "### ManagerObj";
        break;
    }
  }
  return join(lines);
}

}  // namespace alo::testing
