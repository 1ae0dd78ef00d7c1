#pragma once

// Canonical ALO markdown ("GPT markdown script") reader/writer, plus the
// bounded repair pass applied to raw LLM responses, fenced code extraction
// and pipe-table parsing. Grammar reference: docs/alo-format.md.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "alo/model.hpp"

namespace alo::script {

// Shortest text that parses back to exactly the same double.
std::string format_number(double v);

std::string serialize(const ALO& alo);

// `always` or `when <subject> <op> <literal>`, as written in policy lines.
std::string condition_text(const Condition& c);

// Repairs `text`, then parses it strictly. The result has
// provenance = llm-generated and passes validate().
// Throws ParseError (line numbers refer to the repaired text) or
// ValidationFailed.
ALO parse_alo_markdown(std::string_view text);

// Strict parse without repair or validation; used by the loader and tests.
ALO parse_canonical(std::string_view text);

enum class RepairRule { R1, R2, R3, R4, R5 };
std::string_view to_string(RepairRule r);

struct RepairResult {
  std::string text;
  std::vector<RepairRule> applied;  // ascending, each at most once
};

// R1 close an unterminated fence; R2 demote over-deep headings to grammar
// depth; R3 drop duplicate keys keeping the first; R4 canonicalise boolean
// literals to yes/no; R5 strip prose lines outside the grammar.
// Idempotent.
RepairResult repair(std::string_view text);

struct CodeBlock {
  std::string language;
  std::string body;
  std::size_t begin = 0;  // body == text.substr(begin, end - begin)
  std::size_t end = 0;
  bool repaired = false;  // unterminated fence closed at end of text (R1)
};

std::vector<CodeBlock> extract_code_blocks(std::string_view text);

struct RaggedRowError : Error {
  std::size_t line;
  RaggedRowError(std::size_t line_, const std::string& detail)
      : Error(ErrorCode::RaggedRow, "line " + std::to_string(line_) + ": " + detail), line(line_) {}
};

struct ParameterTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// First pipe table (header row + separator row) in the text.
// Throws Error{NoTableFound} or RaggedRowError.
ParameterTable parse_parameter_table(std::string_view text);

// Turns a brainstormed parameter table into a derived ALO: numeric cells
// become scalar states (unit kept), yes/no cells booleans, short words
// labels, anything else knowledge.
ALO alo_from_parameter_table(const std::string& name, const ParameterTable& table);

}  // namespace alo::script
