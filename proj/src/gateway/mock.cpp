#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <regex>

#include "alo/gateway.hpp"
#include "alo/script.hpp"
#include "mock_corpus.hpp"

namespace alo::gateway {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t messages_hash(const std::vector<Message>& messages) {
  std::string blob;
  for (const auto& m : messages) {
    blob += to_string(m.role);
    blob += '\0';
    blob += m.content;
    blob += '\0';
  }
  return fnv1a64(blob);
}

// Integer-only draws so replies are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

// A reply as perturbable pieces plus a renderer.
struct Draft {
  std::vector<std::string> texts;
  std::vector<bool> swappable;
  std::vector<std::vector<std::size_t>> lists;  // reorderable runs of text indices
  std::function<std::string(const std::vector<std::string>&)> render;

  std::size_t add(std::string text, bool can_swap) {
    texts.push_back(std::move(text));
    swappable.push_back(can_swap);
    return texts.size() - 1;
  }
};

struct WordRef {
  std::size_t text;
  std::size_t offset;
  std::size_t length;
  std::size_t group;
};

const std::map<std::string, std::size_t, std::less<>>& synonym_index() {
  static const auto index = [] {
    std::map<std::string, std::size_t, std::less<>> m;
    const auto& groups = corpus::synonym_groups();
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (auto w : groups[g]) m.emplace(std::string(w), g);
    return m;
  }();
  return index;
}

std::vector<WordRef> swappable_words(const Draft& d) {
  std::vector<WordRef> out;
  const auto& index = synonym_index();
  for (std::size_t t = 0; t < d.texts.size(); ++t) {
    if (!d.swappable[t]) continue;
    const std::string& s = d.texts[t];
    for (std::size_t i = 0; i < s.size();) {
      auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
      if (!alpha(s[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && alpha(s[j])) ++j;
      std::string word = s.substr(i, j - i);
      for (auto& c : word)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (auto it = index.find(word); it != index.end()) out.push_back({t, i, j - i, it->second});
      i = j;
    }
  }
  return out;
}

void perturb(Draft& d, double temperature, const MockOptions& opt, Rng& rng) {
  auto words = swappable_words(d);
  auto swaps = static_cast<std::size_t>(std::llround(temperature * opt.swap_rate * static_cast<double>(words.size())));
  swaps = std::min(swaps, words.size());

  // Partial Fisher-Yates picks distinct positions.
  std::vector<std::size_t> order(words.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < swaps; ++i) std::swap(order[i], order[i + rng.below(order.size() - i)]);
  std::vector<WordRef> chosen;
  for (std::size_t i = 0; i < swaps; ++i) chosen.push_back(words[order[i]]);
  // Apply right to left so earlier offsets stay valid.
  std::sort(chosen.begin(), chosen.end(), [](const WordRef& a, const WordRef& b) {
    return a.text != b.text ? a.text < b.text : a.offset > b.offset;
  });
  const auto& groups = corpus::synonym_groups();
  for (const auto& w : chosen) {
    std::string& s = d.texts[w.text];
    const auto& group = groups[w.group];
    std::string current = s.substr(w.offset, w.length);
    bool capital = current[0] >= 'A' && current[0] <= 'Z';
    for (auto& c : current)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    std::vector<std::string_view> others;
    for (auto g : group)
      if (g != current) others.push_back(g);
    std::string replacement(others[rng.below(others.size())]);
    if (capital) replacement[0] = static_cast<char>(replacement[0] - 'a' + 'A');
    s.replace(w.offset, w.length, replacement);
  }

  auto reorders = static_cast<std::size_t>(std::llround(temperature * opt.reorder_rate));
  std::vector<std::size_t> eligible;
  for (std::size_t l = 0; l < d.lists.size(); ++l)
    if (d.lists[l].size() >= 2) eligible.push_back(l);
  for (std::size_t k = 0; k < reorders && !eligible.empty(); ++k) {
    const auto& list = d.lists[eligible[rng.below(eligible.size())]];
    std::size_t j = rng.below(list.size() - 1);
    std::swap(d.texts[list[j]], d.texts[list[j + 1]]);
  }
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
  return s;
}

std::string camel(const std::string& name) {
  std::string out;
  bool up = true;
  for (char c : name) {
    bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    if (!alnum) {
      up = true;
      continue;
    }
    out += up && c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c;
    up = false;
  }
  return out;
}

void add_chatter(Draft& d, Rng& base, std::size_t count, std::vector<std::size_t>& ids) {
  const auto& bank = corpus::chatter_bank();
  for (std::size_t i = 0; i < count; ++i) ids.push_back(d.add(std::string(bank[base.below(bank.size())]), true));
}

Draft alo_draft(const std::string& name, bool codegen, Rng& base) {
  std::string doc;
  if (auto canned = corpus::alo_document(corpus::key_of(name)))
    doc = replace_all(std::string(*canned), "{name}", name);
  else
    doc = corpus::generic_document(name);
  ALO alo = script::parse_canonical(doc);

  Draft d;
  std::vector<std::size_t> intro, outro;
  add_chatter(d, base, 2, intro);
  std::vector<std::pair<std::size_t, std::size_t>> knowledge_slots;  // (sub, first text index)
  for (std::size_t s = 0; s < alo.sub_objects.size(); ++s) {
    std::vector<std::size_t> ids;
    for (const auto& k : alo.sub_objects[s].knowledge) ids.push_back(d.add(k, true));
    if (!ids.empty()) knowledge_slots.emplace_back(s, ids.front());
    d.lists.push_back(ids);
  }
  add_chatter(d, base, 1, outro);

  d.render = [alo, intro, outro, knowledge_slots, codegen, name](const std::vector<std::string>& t) mutable {
    for (const auto& [s, first] : knowledge_slots)
      for (std::size_t k = 0; k < alo.sub_objects[s].knowledge.size(); ++k)
        alo.sub_objects[s].knowledge[k] = t[first + k];
    std::string out;
    for (auto i : intro) out += t[i] + " ";
    out.back() = '\n';
    out += "\n```markdown\n" + script::serialize(alo) + "```\n\n";
    if (codegen) {
      std::string cls = camel(name);
      out += "```javascript\nclass " + cls + " {\n  constructor(sceneObject, world) {\n"
             "    this.object = sceneObject;\n    this.world = world;\n    this.state = \"" +
             alo.manager.current_state + "\";\n  }\n\n  update" + cls +
             "PerFrame(dt) {\n    // state machine goes here\n  }\n}\n```\n\n";
    }
    for (auto i : outro) out += t[i] + "\n";
    return out;
  };
  return d;
}

Draft prose_draft(const std::string& topic, std::size_t target_words, Rng& base) {
  Draft d;
  const auto& bank = corpus::prose_bank();
  std::vector<std::size_t> ids;
  std::size_t words = 0;
  while (words < target_words) {
    std::string sentence = capitalize(replace_all(std::string(bank[base.below(bank.size())]), "{topic}", topic));
    words += static_cast<std::size_t>(std::count(sentence.begin(), sentence.end(), ' ')) + 1;
    ids.push_back(d.add(std::move(sentence), true));
  }
  d.lists.push_back(ids);
  d.render = [](const std::vector<std::string>& t) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
      out += t[i];
      out += (i + 1) % 4 == 0 || i + 1 == t.size() ? "\n\n" : " ";
    }
    out.pop_back();
    return out;
  };
  return d;
}

Draft table_draft(const std::string& name, Rng& base) {
  Draft d;
  std::vector<std::size_t> intro;
  add_chatter(d, base, 1, intro);
  std::string table = corpus::parameter_table(name);
  std::vector<std::string> lines;
  for (std::size_t p = 0; p <= table.size();) {
    std::size_t nl = table.find('\n', p);
    if (nl == std::string::npos) nl = table.size();
    lines.push_back(table.substr(p, nl - p));
    p = nl + 1;
  }
  std::size_t header = d.add(lines[0] + "\n" + lines[1], false);
  std::vector<std::size_t> rows;
  for (std::size_t i = 2; i < lines.size(); ++i) rows.push_back(d.add(lines[i], false));
  d.lists.push_back(rows);
  d.render = [intro, header, rows, name](const std::vector<std::string>& t) {
    std::string out = "ALOs(" + name + ") subobject list and parameters:\n\n" + t[header] + "\n";
    for (auto r : rows) out += t[r] + "\n";
    out += "\n" + t[intro.front()] + "\n";
    return out;
  };
  return d;
}

Draft notes_draft(const std::string& name, Rng& base) {
  Draft d;
  std::vector<std::size_t> intro;
  add_chatter(d, base, 1, intro);
  std::size_t notes = d.add(corpus::brainstorm_notes(name), true);
  d.render = [intro, notes](const std::vector<std::string>& t) {
    return t[notes] + "\n\n" + t[intro.front()] + "\n";
  };
  return d;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Role r) {
  switch (r) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(BackendKind k) { return k == BackendKind::live ? "live" : "mock"; }

void validate(const ChatRequest& req) {
  if (req.messages.empty()) throw Error(ErrorCode::InvalidRequest, "request has no messages");
  if (!std::isfinite(req.temperature) || req.temperature < 0.0 || req.temperature > 2.0)
    throw Error(ErrorCode::InvalidRequest, "temperature must lie in [0, 2]");
  for (std::size_t i = 1; i < req.messages.size(); ++i)
    if (req.messages[i].role == Role::system)
      throw Error(ErrorCode::InvalidRequest, "a system message must come first");
  if (req.max_tokens && *req.max_tokens <= 0) throw Error(ErrorCode::InvalidRequest, "max_tokens must be positive");
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') {
      cur += static_cast<char>(c - 'A' + 'a');
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

EmbeddingVector hash_embedding(std::string_view text, std::size_t dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidRequest, "embedding dimension must be positive");
  EmbeddingVector v;
  v.source_text_hash = fnv1a64(text);
  std::vector<std::int64_t> counts(dim, 0);
  auto add = [&](std::uint64_t h) { counts[h % dim] += (h >> 63) ? -1 : 1; };
  auto tokens = tokenize(text);
  for (const auto& t : tokens) add(fnv1a64(t));
  if (tokens.empty()) add(v.source_text_hash);
  bool zero = std::all_of(counts.begin(), counts.end(), [](std::int64_t c) { return c == 0; });
  if (zero) add(v.source_text_hash);  // every token cancelled out

  // Integer sum of squares keeps the norm exact and platform independent.
  std::int64_t sum = 0;
  for (auto c : counts) sum += c * c;
  double norm = std::sqrt(static_cast<double>(sum));
  v.values.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) v.values[i] = static_cast<double>(counts[i]) / norm;
  return v;
}

Completion MockBackend::complete(const ChatRequest& req) const {
  validate(req);
  std::string user, system;
  for (const auto& m : req.messages) {
    if (m.role == Role::user) user = trim(m.content);
    if (m.role == Role::system && system.empty()) system = m.content;
  }
  bool codegen = system.find("javascript") != std::string::npos;
  std::uint64_t h = messages_hash(req.messages);
  Rng base(mix64(h));

  static const std::regex create(R"(^Create ALOs\((.+)\)$)");
  static const std::regex interact(R"(^ALOs\((.+?)\) (.+?) ALOs\((.+?)\)(?: in ALOs\((.+)\))?\. Create ALOs\((.+)\)$)");
  static const std::regex brainstorm(R"(^ALOs\((.+?)\) and brainstorm all parameters)");
  static const std::regex tableize(R"(^get ALOs\((.+?)\) object and brainstorm .*output one ALOs\((.+?)\) object)");
  static const std::regex define(R"(^(?:define|describe|explain)\s+(.+?)(?:\s+in\s+(\d+)\s+words)?\.?$)",
                                 std::regex::icase);
  std::smatch m;
  Draft draft;
  if (std::regex_match(user, m, create)) {
    draft = alo_draft(m[1].str(), codegen, base);
  } else if (std::regex_match(user, m, interact)) {
    draft = alo_draft(m[5].str(), codegen, base);
  } else if (std::regex_search(user, m, tableize)) {
    draft = table_draft(m[2].str(), base);
  } else if (std::regex_search(user, m, brainstorm)) {
    draft = notes_draft(m[1].str(), base);
  } else if (std::regex_match(user, m, define)) {
    std::size_t words = m[2].matched ? std::stoul(m[2].str()) : 300;
    draft = prose_draft(m[1].str(), std::min<std::size_t>(words, 5000), base);
  } else {
    std::string topic = user.empty() ? std::string("the request") : user.substr(0, 60);
    while (!topic.empty() && (topic.back() == '.' || topic.back() == '?')) topic.pop_back();
    draft = prose_draft(topic, 300, base);
  }

  if (req.temperature > 0.0) {
    Rng noise(mix64(h ^ mix64(req.seed)));
    perturb(draft, req.temperature, options_, noise);
  }
  Completion c;
  c.content = draft.render(draft.texts);
  c.backend = BackendKind::mock;
  return c;
}

std::vector<EmbeddingVector> MockBackend::embed(const std::vector<std::string>& texts) const {
  if (texts.empty()) throw Error(ErrorCode::EmptyInput, "nothing to embed");
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (texts[i].empty()) throw Error(ErrorCode::EmptyInput, "text " + std::to_string(i) + " is empty");
    out.push_back(hash_embedding(texts[i], options_.dimension));
  }
  return out;
}

}  // namespace alo::gateway
