#include <optional>
#include <set>

#include "alo/script.hpp"
#include "text.hpp"

namespace alo::script {

using namespace detail;

std::string_view to_string(RepairRule r) {
  switch (r) {
    case RepairRule::R1: return "R1";
    case RepairRule::R2: return "R2";
    case RepairRule::R3: return "R3";
    case RepairRule::R4: return "R4";
    case RepairRule::R5: return "R5";
  }
  return "R?";
}

namespace {

bool is_key_line(std::string_view raw) { return raw.substr(0, 2) == "- "; }

bool is_item_line(std::string_view raw) {
  return !raw.empty() && is_space(raw.front()) && ltrim(raw).substr(0, 2) == "- ";
}

// Text between "- " and the first ':' of a key line.
std::string key_of(std::string_view raw) {
  std::string_view body = trim(raw.substr(2));
  auto colon = body.find(':');
  return std::string(trim(body.substr(0, colon)));
}

std::optional<std::string_view> canonical_bool(std::string_view token) {
  std::string t = lower(token);
  if (t == "yes" || t == "true") return "yes";
  if (t == "no" || t == "false") return "no";
  return std::nullopt;
}

struct Pass {
  std::vector<std::string> lines;
  std::set<RepairRule> applied;

  // R1
  static std::string close_fences(std::string_view text, std::set<RepairRule>& applied) {
    std::size_t fences = 0;
    for (const auto& l : split_lines(text))
      if (is_fence(l)) ++fences;
    std::string out(text);
    if (fences % 2 == 1) {
      out += (!out.empty() && out.back() == '\n') ? "```\n" : "\n```";
      applied.insert(RepairRule::R1);
    }
    return out;
  }

  // R2 + R5
  void normalise_structure() {
    std::optional<std::size_t> title;
    for (std::size_t i = 0; i < lines.size() && !title; ++i) {
      Heading h = parse_heading(lines[i]);
      if (h.depth > 0 && is_title_text(h.text)) title = i;
    }
    if (!title) return;

    std::vector<std::string> out;
    if (*title > 0) applied.insert(RepairRule::R5);

    std::string_view section;
    bool foreign = false;
    for (std::size_t i = *title; i < lines.size(); ++i) {
      std::string& raw = lines[i];
      Heading h = parse_heading(raw);
      if (i == *title) {
        if (h.depth > 1) {
          raw = "# " + std::string(h.text);
          applied.insert(RepairRule::R2);
        }
        out.push_back(raw);
        continue;
      }
      if (h.depth > 0) {
        std::string_view name = section_name(h.text);
        if (!name.empty() && h.depth >= 2) {
          std::string canonical = "## " + std::string(name);
          if (h.depth > 2 || h.text != name) {
            raw = canonical;
            applied.insert(RepairRule::R2);
          }
          section = name;
          foreign = false;
          out.push_back(raw);
        } else if (!name.empty()) {
          // Too shallow; left for the parser to report.
          section = name;
          foreign = false;
          out.push_back(raw);
        } else if (section == "subObjList" && h.depth >= 3 && !foreign) {
          if (h.depth > 3) {
            raw = "### " + std::string(h.text);
            applied.insert(RepairRule::R2);
          }
          out.push_back(raw);
        } else {
          foreign = true;
          applied.insert(RepairRule::R5);
        }
        continue;
      }
      std::string_view t = trim(raw);
      if (t.empty()) {
        out.push_back(raw);
        continue;
      }
      if (!foreign && (is_key_line(raw) || is_item_line(raw))) {
        out.push_back(raw);
        continue;
      }
      applied.insert(RepairRule::R5);
    }
    lines = std::move(out);
  }

  // R3
  void drop_duplicate_keys() {
    static const std::set<std::string> sub_keys = {"skills", "knowledge", "states"};
    static const std::set<std::string> manager_keys = {"currentState", "stateSet",
                                                       "rewardAccumulator", "policy"};
    std::vector<std::string> out;
    std::string_view section;
    std::set<std::string> seen_keys;
    std::set<std::string> seen_states;
    std::string current_key;
    bool dropping = false;

    for (auto& raw : lines) {
      Heading h = parse_heading(raw);
      if (h.depth > 0) {
        if (std::string_view name = section_name(h.text); !name.empty()) section = name;
        seen_keys.clear();
        current_key.clear();
        dropping = false;
        out.push_back(raw);
        continue;
      }
      if (is_key_line(raw) && (section == "subObjList" || section == "managerObj")) {
        std::string key = key_of(raw);
        const auto& known = section == "subObjList" ? sub_keys : manager_keys;
        if (known.count(key) && !seen_keys.insert(key).second) {
          dropping = true;
          applied.insert(RepairRule::R3);
          continue;
        }
        dropping = false;
        current_key = key;
        if (key == "states") seen_states.clear();
        out.push_back(raw);
        continue;
      }
      if (is_item_line(raw)) {
        if (dropping) continue;
        if (section == "subObjList" && current_key == "states") {
          std::string_view body = trim(ltrim(raw).substr(2));
          std::string name(trim(body.substr(0, body.find(':'))));
          if (!seen_states.insert(name).second) {
            applied.insert(RepairRule::R3);
            continue;
          }
        }
        out.push_back(raw);
        continue;
      }
      if (!trim(raw).empty()) {
        dropping = false;
        current_key.clear();
      }
      out.push_back(raw);
    }
    lines = std::move(out);
  }

  // R4
  void canonicalise_booleans() {
    std::string_view section;
    std::string current_key;
    for (auto& raw : lines) {
      Heading h = parse_heading(raw);
      if (h.depth > 0) {
        if (std::string_view name = section_name(h.text); !name.empty()) section = name;
        current_key.clear();
        continue;
      }
      if (is_key_line(raw)) {
        current_key = key_of(raw);
        continue;
      }
      if (!is_item_line(raw)) continue;

      std::size_t body_at = raw.find("- ") + 2;
      std::string_view body(raw);
      body.remove_prefix(body_at);
      std::size_t token_at = std::string::npos;
      std::size_t token_len = 0;

      if (section == "subObjList" && current_key == "states") {
        auto colon = body.find(':');
        auto eq = body.find('=');
        if (colon == std::string_view::npos || eq == std::string_view::npos || eq < colon) continue;
        if (trim(body.substr(colon + 1, eq - colon - 1)) != "boolean") continue;
        std::string_view value = trim(body.substr(eq + 1));
        token_at = body_at + static_cast<std::size_t>(value.data() - body.data());
        token_len = value.size();
      } else if (section == "managerObj" && current_key == "policy") {
        std::string_view b = trim(body);
        if (b.substr(0, 5) != "when ") continue;
        auto arrow = b.find(" -> ");
        std::string_view cond = trim(b.substr(5, arrow == std::string_view::npos ? arrow : arrow - 5));
        auto last_space = cond.rfind(' ');
        if (last_space == std::string_view::npos) continue;
        std::string_view value = cond.substr(last_space + 1);
        token_at = static_cast<std::size_t>(value.data() - raw.data());
        token_len = value.size();
      } else {
        continue;
      }

      std::string_view token(raw.data() + token_at, token_len);
      auto canon = canonical_bool(token);
      if (!canon || token == *canon) continue;
      raw.replace(token_at, token_len, *canon);
      applied.insert(RepairRule::R4);
    }
  }
};

}  // namespace

RepairResult repair(std::string_view text) {
  Pass pass;
  std::string work = Pass::close_fences(text, pass.applied);
  bool trailing_newline = !work.empty() && work.back() == '\n';
  pass.lines = split_lines(work);

  pass.normalise_structure();
  pass.drop_duplicate_keys();
  pass.canonicalise_booleans();

  RepairResult result;
  for (std::size_t i = 0; i < pass.lines.size(); ++i) {
    if (i) result.text += '\n';
    result.text += pass.lines[i];
  }
  if (trailing_newline && !pass.lines.empty()) result.text += '\n';
  result.applied.assign(pass.applied.begin(), pass.applied.end());
  return result;
}

}  // namespace alo::script
