#pragma once

// Prompt templates (compiled in from resources/prompts/), image-prompt
// flattening and the visual/performance parameter classifier.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alo/model.hpp"
#include "alo/registry.hpp"

namespace alo::prompt {

enum class TemplateId { system_markdown, system_codegen, create, interact, brainstorm, tableize, image };

std::string_view to_string(TemplateId id);  // "system-markdown", ...
std::optional<TemplateId> template_from_string(std::string_view s);

struct PromptTemplate {
  TemplateId id;
  std::vector<std::string> slots;  // in order of appearance
  std::string body;
};

const PromptTemplate& get_template(TemplateId id);

// Substitutes every slot. Throws Error{InvalidRequest} if a slot is unbound
// or a binding names no slot.
std::string render(const PromptTemplate& t, const std::map<std::string, std::string>& bindings);

enum class SystemVariant { markdown, codegen };

// The verbatim system prompt; its `{input}` marker is left in place, as the
// prompt is sent unrendered.
const std::string& system_prompt(SystemVariant variant);

// "Create ALOs(<input>)". Throws Error{EmptyInput}.
std::string creation_prompt(std::string_view input);

// "ALOs(a) <verb> ALOs(b)[ in ALOs(context)]. Create ALOs(a <verb> b)".
// Throws Error{UnknownName} unless both names are registered,
// Error{EmptyInput} for an empty verb.
std::string interaction_prompt(const Registry& registry, const std::string& a, const std::string& b,
                               const std::optional<std::string>& context = std::nullopt,
                               const std::string& verb = "meets");

// Name of the pair ALO an interaction prompt asks for: "<a> <verb> <b>".
std::string pair_name(const std::string& a, const std::string& b, const std::string& verb = "meets");

// [brainstorm, tableize] for `name`. Throws Error{EmptyInput}.
std::vector<std::string> brainstorm_sequence(std::string_view name);

// "The <name>. <state> is <value>. ... <suffix>", states in sub-object
// order then by name.
std::string image_prompt(const ALO& alo, std::string_view suffix = "--v 5");

// ---------------------------------------------------------------------------

enum class ParameterLabel { visual, performance, other };
std::string_view to_string(ParameterLabel l);

struct ParameterClass {
  ParameterLabel label = ParameterLabel::other;
  std::string matched_keyword;  // empty for `other`
  friend bool operator==(const ParameterClass&, const ParameterClass&) = default;
};

class Lexicon {
 public:
  // The lexicon shipped in resources/lexicon/parameters.txt.
  static const Lexicon& builtin();
  // "<visual|performance>: <keyword>" lines; '#' starts a comment.
  // Throws Error{InvalidRequest} on a malformed line.
  static Lexicon parse(std::string_view text);
  // Throws Error{IoFailure} or Error{InvalidRequest}.
  static Lexicon load(const std::filesystem::path& path);

  // Classification of a single word (already lowercase).
  std::optional<ParameterClass> match(std::string_view word) const;

  const std::vector<std::string>& visual() const { return visual_; }
  const std::vector<std::string>& performance() const { return performance_; }

 private:
  std::vector<std::string> visual_;
  std::vector<std::string> performance_;
};

// "printSpeed-2" -> {"print", "speed", "2"}
std::vector<std::string> split_words(std::string_view name);

struct Classification {
  // Keyed by "subObjList[<i>].states.<name>".
  std::map<std::string, ParameterClass> classes;
  // |visual| / |all|; absent when there are no states.
  std::optional<double> visual_coverage;
};

Classification classify_parameters(const ALO& alo, const Lexicon& lexicon = Lexicon::builtin());

}  // namespace alo::prompt
