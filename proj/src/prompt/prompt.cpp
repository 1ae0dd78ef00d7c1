#include "alo/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "alo/script.hpp"

namespace alo::detail {
std::optional<std::string_view> embedded_resource(std::string_view path);
}

namespace alo::prompt {

namespace {

constexpr std::array<std::pair<TemplateId, std::string_view>, 7> kIds = {{
    {TemplateId::system_markdown, "system-markdown"},
    {TemplateId::system_codegen, "system-codegen"},
    {TemplateId::create, "create"},
    {TemplateId::interact, "interact"},
    {TemplateId::brainstorm, "brainstorm"},
    {TemplateId::tableize, "tableize"},
    {TemplateId::image, "image"},
}};

std::string resource_text(std::string_view path) {
  auto data = detail::embedded_resource(path);
  if (!data) throw Error(ErrorCode::NotFound, "missing built-in resource " + std::string(path));
  std::string text(*data);
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

bool slot_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Positions of `{name}` markers as (offset, name).
std::vector<std::pair<std::size_t, std::string>> markers(std::string_view body) {
  std::vector<std::pair<std::size_t, std::string>> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') continue;
    std::size_t j = i + 1;
    while (j < body.size() && slot_char(body[j])) ++j;
    if (j > i + 1 && j < body.size() && body[j] == '}') {
      out.emplace_back(i, std::string(body.substr(i + 1, j - i - 1)));
      i = j;
    }
  }
  return out;
}

PromptTemplate load_template(TemplateId id) {
  PromptTemplate t{id, {}, resource_text("prompts/" + std::string(to_string(id)) + ".txt")};
  for (auto& [_, name] : markers(t.body)) {
    if (std::find(t.slots.begin(), t.slots.end(), name) != t.slots.end())
      throw Error(ErrorCode::InvalidRequest,
                  "template " + std::string(to_string(id)) + " repeats slot {" + name + "}");
    t.slots.push_back(name);
  }
  return t;
}

void check_binding(const std::string& slot, const std::string& value) {
  if (value.find_first_of("{}\n\r") != std::string::npos)
    throw Error(ErrorCode::InvalidRequest, "value for {" + slot + "} contains braces or a line break");
}

std::string require_text(std::string_view s, const char* what) {
  std::string v(s);
  if (v.find_first_not_of(" \t") == std::string::npos)
    throw Error(ErrorCode::EmptyInput, std::string(what) + " is empty");
  return v;
}

std::string value_text(const StateValue& v) {
  struct Visitor {
    std::string operator()(const ScalarState& s) const {
      std::string out = script::format_number(s.value);
      if (!s.unit.empty()) out += " " + s.unit;
      return out;
    }
    std::string operator()(const BooleanState& b) const { return b.value ? "yes" : "no"; }
    std::string operator()(const LabelState& l) const { return l.value; }
    std::string operator()(const Vector3State& p) const {
      return "(" + script::format_number(p.value.x) + ", " + script::format_number(p.value.y) + ", " +
             script::format_number(p.value.z) + ")";
    }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace

std::string_view to_string(TemplateId id) {
  for (const auto& [k, v] : kIds)
    if (k == id) return v;
  return "?";
}

std::optional<TemplateId> template_from_string(std::string_view s) {
  for (const auto& [k, v] : kIds)
    if (v == s) return k;
  return std::nullopt;
}

const PromptTemplate& get_template(TemplateId id) {
  static const std::array<PromptTemplate, 7> all = [] {
    std::array<PromptTemplate, 7> a{};
    for (std::size_t i = 0; i < kIds.size(); ++i) a[i] = load_template(kIds[i].first);
    return a;
  }();
  return all[static_cast<std::size_t>(id)];
}

std::string render(const PromptTemplate& t, const std::map<std::string, std::string>& bindings) {
  for (const auto& [slot, value] : bindings) {
    if (std::find(t.slots.begin(), t.slots.end(), slot) == t.slots.end())
      throw Error(ErrorCode::InvalidRequest,
                  "template " + std::string(to_string(t.id)) + " has no slot {" + slot + "}");
    check_binding(slot, value);
  }
  std::string out;
  std::size_t pos = 0;
  for (const auto& [at, name] : markers(t.body)) {
    auto it = bindings.find(name);
    if (it == bindings.end())
      throw Error(ErrorCode::InvalidRequest,
                  "slot {" + name + "} of template " + std::string(to_string(t.id)) + " is unbound");
    out.append(t.body, pos, at - pos);
    out += it->second;
    pos = at + name.size() + 2;
  }
  out.append(t.body, pos);
  return out;
}

const std::string& system_prompt(SystemVariant variant) {
  return variant == SystemVariant::markdown ? get_template(TemplateId::system_markdown).body
                                            : get_template(TemplateId::system_codegen).body;
}

std::string creation_prompt(std::string_view input) {
  return render(get_template(TemplateId::create), {{"input", require_text(input, "input")}});
}

std::string pair_name(const std::string& a, const std::string& b, const std::string& verb) {
  return a + " " + verb + " " + b;
}

std::string interaction_prompt(const Registry& registry, const std::string& a, const std::string& b,
                               const std::optional<std::string>& context, const std::string& verb) {
  for (const std::string* n : {&a, &b})
    if (!registry.contains(*n)) throw Error(ErrorCode::UnknownName, "no registered ALO named '" + *n + "'");
  require_text(verb, "verb");
  std::string where;
  if (context && !context->empty()) where = " in ALOs(" + *context + ")";
  return render(get_template(TemplateId::interact),
                {{"a", a}, {"verb", verb}, {"b", b}, {"where", where}, {"pair", pair_name(a, b, verb)}});
}

std::vector<std::string> brainstorm_sequence(std::string_view name) {
  std::string n = require_text(name, "name");
  return {render(get_template(TemplateId::brainstorm), {{"name", n}}),
          render(get_template(TemplateId::tableize), {{"name", n}, {"output_name", n}})};
}

std::string image_prompt(const ALO& alo, std::string_view suffix) {
  std::string description = "The " + alo.name + ".";
  for (const auto& sub : alo.sub_objects)
    for (const auto& [name, var] : sub.states)  // std::map: lexicographic
      description += " " + name + " is " + value_text(var.value) + ".";
  std::string out = description;
  out += ' ';
  out += suffix;
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ParameterLabel l) {
  switch (l) {
    case ParameterLabel::visual: return "visual";
    case ParameterLabel::performance: return "performance";
    case ParameterLabel::other: return "other";
  }
  return "other";
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lexicon = parse(resource_text("lexicon/parameters.txt"));
  return lexicon;
}

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto words = split_words(line);
    if (words.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos || words.size() < 2)
      throw Error(ErrorCode::InvalidRequest, "lexicon line " + std::to_string(line_no) + ": expected '<class>: <keyword>'");
    auto cls = split_words(line.substr(0, colon));
    auto kw = split_words(line.substr(colon + 1));
    if (cls.size() != 1 || kw.size() != 1)
      throw Error(ErrorCode::InvalidRequest, "lexicon line " + std::to_string(line_no) + ": one class and one keyword");
    if (cls[0] == "visual")
      lex.visual_.push_back(kw[0]);
    else if (cls[0] == "performance")
      lex.performance_.push_back(kw[0]);
    else
      throw Error(ErrorCode::InvalidRequest, "lexicon line " + std::to_string(line_no) + ": unknown class '" + cls[0] + "'");
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read lexicon " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<ParameterClass> Lexicon::match(std::string_view word) const {
  auto hit = [&](const std::vector<std::string>& keywords) -> std::optional<std::string> {
    for (const auto& k : keywords) {
      if (word == k) return k;
      // Plural forms: "colors", "speeds".
      if (word.size() == k.size() + 1 && word.back() == 's' && word.substr(0, k.size()) == k) return k;
    }
    return std::nullopt;
  };
  if (auto k = hit(visual_)) return ParameterClass{ParameterLabel::visual, *k};
  if (auto k = hit(performance_)) return ParameterClass{ParameterLabel::performance, *k};
  return std::nullopt;
}

std::vector<std::string> split_words(std::string_view name) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) words.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    bool upper = c >= 'A' && c <= 'Z';
    bool lower = c >= 'a' && c <= 'z';
    bool digit = c >= '0' && c <= '9';
    if (!upper && !lower && !digit) {
      flush();
      continue;
    }
    // camelCase boundary: "printSpeed" -> print|Speed; "DPIValue" -> DPI|Value.
    if (upper && !cur.empty()) {
      char prev = name[i - 1];
      bool prev_lower = (prev >= 'a' && prev <= 'z') || (prev >= '0' && prev <= '9');
      bool next_lower = i + 1 < name.size() && name[i + 1] >= 'a' && name[i + 1] <= 'z';
      bool prev_upper = prev >= 'A' && prev <= 'Z';
      if (prev_lower || (prev_upper && next_lower)) flush();
    }
    cur += upper ? static_cast<char>(c - 'A' + 'a') : c;
  }
  flush();
  return words;
}

Classification classify_parameters(const ALO& alo, const Lexicon& lexicon) {
  Classification result;
  std::size_t visual = 0;
  for (std::size_t i = 0; i < alo.sub_objects.size(); ++i) {
    for (const auto& [name, var] : alo.sub_objects[i].states) {
      std::vector<std::string> words = split_words(name);
      if (const auto* s = std::get_if<ScalarState>(&var.value)) {
        auto unit = split_words(s->unit);
        words.insert(words.end(), unit.begin(), unit.end());
      }
      ParameterClass cls;
      for (const auto& w : words) {
        if (auto m = lexicon.match(w)) {
          cls = *m;
          break;
        }
      }
      if (cls.label == ParameterLabel::visual) ++visual;
      result.classes.emplace("subObjList[" + std::to_string(i) + "].states." + name, cls);
    }
  }
  if (!result.classes.empty())
    result.visual_coverage = static_cast<double>(visual) / static_cast<double>(result.classes.size());
  return result;
}

}  // namespace alo::prompt
