#pragma once

// Line-level helpers shared by the script reader, writer and repair pass.

#include <string>
#include <string_view>
#include <vector>

namespace alo::script::detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string_view ltrim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  return s;
}

// Splits on '\n'. A trailing newline does not produce an extra empty line.
inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t p = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, p == std::string_view::npos ? p : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

struct Heading {
  int depth = 0;          // 0 when the line is not a heading
  std::string_view text;  // trimmed heading text
};

inline Heading parse_heading(std::string_view line) {
  std::string_view t = trim(line);
  int depth = 0;
  while (depth < static_cast<int>(t.size()) && t[depth] == '#') ++depth;
  if (depth == 0 || depth > 6) return {};
  if (depth < static_cast<int>(t.size()) && t[depth] != ' ' && t[depth] != '\t') return {};
  return {depth, trim(t.substr(depth))};
}

inline bool is_fence(std::string_view line) {
  std::size_t indent = 0;
  while (indent < line.size() && line[indent] == ' ') ++indent;
  return indent <= 3 && line.substr(indent, 3) == "```";
}

// "ALO:" title headings, the four section names, or neither.
inline bool is_title_text(std::string_view text) { return text.substr(0, 4) == "ALO:"; }

inline constexpr std::string_view kSections[] = {"subObjList", "managerObj", "stepObjList",
                                                 "interactions"};

// Canonical spelling of a section name matched case-insensitively, or "".
inline std::string_view section_name(std::string_view text) {
  for (std::string_view s : kSections)
    if (lower(text) == lower(s)) return s;
  return {};
}

}  // namespace alo::script::detail
