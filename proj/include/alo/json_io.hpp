#pragma once

// Exact JSON mirror of the ALO model (the `.alo.json` sidecar format).

#include <nlohmann/json.hpp>

#include "alo/model.hpp"

namespace alo {

nlohmann::json to_json(const ALO& alo);
nlohmann::json to_json(const InteractionRule& rule);
nlohmann::json to_json(const StepObject& step);
nlohmann::json to_json(const Condition& condition);
nlohmann::json to_json(const SkillSpec& skill);
nlohmann::json to_json(const StateVariable& var);

// Throws Error{CorruptEntry} when the document does not match the schema.
ALO alo_from_json(const nlohmann::json& j);
InteractionRule interaction_from_json(const nlohmann::json& j);

}  // namespace alo
