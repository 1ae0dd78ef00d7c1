#pragma once

// Canned material for the mock chat backend.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alo::gateway::corpus {

// Lowercase letters and digits only: "WiFi router" -> "wifirouter".
std::string key_of(std::string_view name);

// Canonical ALO document for a known name/pair key, with "{name}" in the
// title line standing for the requested name.
std::optional<std::string_view> alo_document(std::string_view key);

// Generic document for names the corpus does not know.
std::string generic_document(const std::string& name);

// Pipe table (header, separator, rows) for a known key, else a generic one.
std::string parameter_table(const std::string& name);

// Brainstorm notes as a numbered list.
std::string brainstorm_notes(const std::string& name);

// Sentence templates with "{topic}" markers.
const std::vector<std::string_view>& prose_bank();
const std::vector<std::string_view>& chatter_bank();

// Groups of interchangeable lowercase words.
const std::vector<std::vector<std::string_view>>& synonym_groups();

}  // namespace alo::gateway::corpus
