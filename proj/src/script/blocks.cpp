#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "alo/script.hpp"
#include "text.hpp"

namespace alo::script {

using namespace detail;

std::vector<CodeBlock> extract_code_blocks(std::string_view text) {
  std::vector<CodeBlock> blocks;
  std::optional<CodeBlock> open;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t line_end = nl == std::string_view::npos ? text.size() : nl;
    std::size_t next = nl == std::string_view::npos ? text.size() : nl + 1;
    std::string_view line = text.substr(pos, line_end - pos);

    if (is_fence(line)) {
      if (!open) {
        CodeBlock b;
        b.language = std::string(trim(trim(line).substr(3)));
        b.begin = next;
        open = b;
      } else if (trim(line).find_first_not_of('`') == std::string_view::npos) {
        // Body ends before the newline that precedes the closing fence.
        open->end = std::max(open->begin, pos == 0 ? 0 : pos - 1);
        open->body = std::string(text.substr(open->begin, open->end - open->begin));
        blocks.push_back(std::move(*open));
        open.reset();
      }
    }
    pos = next;
  }
  if (open) {
    std::size_t end = text.size();
    if (end > open->begin && text[end - 1] == '\n') --end;
    open->end = std::max(open->begin, end);
    open->body = std::string(text.substr(open->begin, open->end - open->begin));
    open->repaired = true;
    blocks.push_back(std::move(*open));
  }
  return blocks;
}

namespace {

bool table_line(std::string_view line) {
  std::string_view t = trim(line);
  return t.size() >= 2 && t.front() == '|';
}

// Splits "| a | b \| c |" into cells, honouring escaped pipes.
std::vector<std::string> cells(std::string_view line) {
  std::string_view t = trim(line);
  if (!t.empty() && t.front() == '|') t.remove_prefix(1);
  if (!t.empty() && t.back() == '|' && !(t.size() >= 2 && t[t.size() - 2] == '\\'))
    t.remove_suffix(1);
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == '\\' && i + 1 < t.size() && t[i + 1] == '|') {
      cur += '|';
      ++i;
    } else if (t[i] == '|') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += t[i];
    }
  }
  out.emplace_back(trim(cur));
  return out;
}

bool separator_row(const std::vector<std::string>& row) {
  return std::all_of(row.begin(), row.end(), [](const std::string& c) {
    return !c.empty() && c.find('-') != std::string::npos &&
           c.find_first_not_of(":- ") == std::string::npos;
  });
}

}  // namespace

ParameterTable parse_parameter_table(std::string_view text) {
  auto lines = split_lines(text);
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    if (!table_line(lines[i]) || !table_line(lines[i + 1])) continue;
    auto sep = cells(lines[i + 1]);
    if (!separator_row(sep)) continue;
    ParameterTable table;
    table.header = cells(lines[i]);
    if (sep.size() != table.header.size())
      throw RaggedRowError(i + 2, "separator has " + std::to_string(sep.size()) + " cells, header " +
                                      std::to_string(table.header.size()));
    for (std::size_t j = i + 2; j < lines.size() && table_line(lines[j]); ++j) {
      auto row = cells(lines[j]);
      if (row.size() != table.header.size())
        throw RaggedRowError(j + 1, "row has " + std::to_string(row.size()) + " cells, header " +
                                        std::to_string(table.header.size()));
      table.rows.push_back(std::move(row));
    }
    return table;
  }
  throw Error(ErrorCode::NoTableFound, "no pipe-delimited table with a separator row");
}

// ---------------------------------------------------------------------------

namespace {

// "Print Speed (Color)" -> "print_speed_color"
std::string to_identifier(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (alnum) {
      if (pending && !out.empty()) out += '_';
      pending = false;
      out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    } else {
      pending = true;
    }
  }
  if (!out.empty() && out.front() >= '0' && out.front() <= '9') out = "p_" + out;
  return out;
}

std::optional<std::size_t> column(const std::vector<std::string>& header,
                                  std::initializer_list<std::string_view> names) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string h = lower(header[i]);
    for (auto n : names)
      if (h.find(n) != std::string::npos) return i;
  }
  return std::nullopt;
}

// Leading number with an optional unit: "4500mAh", "10 ppm", "95%".
std::optional<ScalarState> scalar_cell(std::string_view cell) {
  std::string_view t = trim(cell);
  double v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p == t.data() || !std::isfinite(v)) return std::nullopt;
  std::string_view rest = trim(t.substr(static_cast<std::size_t>(p - t.data())));
  ScalarState s;
  s.value = v;
  s.min = std::min(0.0, 2.0 * v);
  s.max = std::max(0.0, 2.0 * v);
  if (rest == "%") {
    s.unit = "percent";
  } else if (!rest.empty()) {
    std::string unit;
    for (char c : rest) {
      if (c == ' ' || c == '-') {
        if (!unit.empty() && unit.back() != '_') unit += '_';
      } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                 c == '_') {
        unit += c;
      } else {
        return std::nullopt;  // "1080x2400" and friends stay knowledge
      }
    }
    while (!unit.empty() && unit.back() == '_') unit.pop_back();
    if (!is_identifier(unit)) return std::nullopt;
    s.unit = unit;
  }
  return s;
}

}  // namespace

ALO alo_from_parameter_table(const std::string& name, const ParameterTable& table) {
  auto sub_col = column(table.header, {"subobject", "sub-object", "component", "category", "object"});
  auto value_col = column(table.header, {"value", "setting", "detail"});
  auto param_col = column(table.header, {"parameter", "attribute", "property", "name", "field"});
  if (!param_col) param_col = sub_col && *sub_col == 0 ? 1 : 0;
  if (!value_col) value_col = table.header.size() - 1;

  ALO alo;
  alo.name = name;
  alo.provenance = Provenance::derived;
  alo.manager.current_state = "idle";
  alo.manager.state_set = {"idle"};

  auto sub_for = [&](const std::string& raw) -> SubObject& {
    std::string id = to_identifier(raw);
    if (id.empty()) id = "main";
    for (auto& s : alo.sub_objects)
      if (s.name == id) return s;
    alo.sub_objects.push_back(SubObject{id, {}, {}, {}});
    return alo.sub_objects.back();
  };

  for (const auto& row : table.rows) {
    const std::string& param = row[*param_col];
    const std::string& value = row[*value_col];
    SubObject& sub = sub_for(sub_col && *sub_col != *param_col ? row[*sub_col] : std::string("main"));
    std::string key = to_identifier(param);
    if (key.empty() || trim(value).empty()) continue;
    std::string unique = key;
    for (int n = 2; sub.states.count(unique); ++n) unique = key + "_" + std::to_string(n);

    std::string v = lower(trim(value));
    std::optional<StateValue> state;
    if (v == "yes" || v == "true") {
      state = BooleanState{true};
    } else if (v == "no" || v == "false") {
      state = BooleanState{false};
    } else if (auto s = scalar_cell(value)) {
      state = *s;
    } else if (std::string label = to_identifier(value);
               is_identifier(label) && label != "yes" && label != "no" &&
               std::count(value.begin(), value.end(), ' ') < 3) {
      state = LabelState{label, {label}};
    }
    if (state) {
      sub.states.emplace(unique, StateVariable{unique, *state});
    } else {
      std::string fact = std::string(trim(param)) + ": " + std::string(trim(value));
      std::replace(fact.begin(), fact.end(), '\n', ' ');
      sub.knowledge.push_back(fact);
    }
  }
  return alo;
}

}  // namespace alo::script
