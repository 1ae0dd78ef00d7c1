#include "alo/registry.hpp"


#include "alo/io.hpp"
#include "alo/json_io.hpp"
#include "alo/script.hpp"

namespace alo {

namespace fs = std::filesystem;

fs::path markdown_path(const fs::path& root, const std::string& name) {
  return root / (name + ".alo.md");
}

fs::path json_path(const fs::path& root, const std::string& name) {
  return root / (name + ".alo.json");
}

ValidationReport check_references(const ALO& alo, const std::map<std::string, ALO>& entries) {
  ValidationReport report;
  for (std::size_t i = 0; i < alo.interactions.size(); ++i) {
    const auto& rule = alo.interactions[i];
    std::string path = "interactions[" + std::to_string(i) + "]";
    bool names_ok = true;
    for (const std::string* n : {&rule.first, &rule.second}) {
      if (!entries.count(*n)) {
        report.violations.push_back(
            {"CrossReferenceBroken", path, "references unregistered ALO '" + *n + "'"});
        names_ok = false;
      }
    }
    if (!names_ok) continue;
    const ALO& responder = entries.at(rule.responder_name());
    if (!responder.find_skill(rule.response_skill))
      report.violations.push_back({"CrossReferenceBroken", path + ".responseSkill",
                                   "'" + responder.name + "' has no skill '" +
                                       rule.response_skill + "'"});
  }
  return report;
}

void Registry::put(ALO alo) {
  ValidationReport local = validate(alo);
  if (!local.ok())
    throw Error(ErrorCode::InvalidALO, "cannot register '" + alo.name + "': " + local.to_string());

  std::map<std::string, ALO> next = entries_;
  std::string name = alo.name;
  next.insert_or_assign(name, std::move(alo));

  // Birth of an ALO re-validates everything it could affect.
  std::string problems;
  for (const auto& [key, entry] : next) {
    ValidationReport r = validate(entry);
    ValidationReport refs = check_references(entry, next);
    r.violations.insert(r.violations.end(), refs.violations.begin(), refs.violations.end());
    if (!r.ok()) problems += (problems.empty() ? "" : "; ") + key + ": " + r.to_string();
  }
  if (!problems.empty())
    throw Error(ErrorCode::CrossReferenceBroken,
                "registering '" + name + "' would leave invalid entries: " + problems);

  entries_ = std::move(next);
  dirty_.insert(name);
}

ALO Registry::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::NotFound, "no ALO named '" + name + "'");
  return it->second;
}

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

namespace {

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void Registry::save() {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + root_.string() + ": " + ec.message());
  for (const auto& [name, entry] : entries_) {
    io::write_file(markdown_path(root_, name), script::serialize(entry));
    io::write_file(json_path(root_, name), to_json(entry).dump(2) + "\n");
  }
  dirty_.clear();
}

Registry::LoadResult Registry::load(const fs::path& root) {
  LoadResult result;
  result.registry.root_ = root;
  std::error_code ec;
  if (!fs::exists(root, ec)) return result;
  if (!fs::is_directory(root, ec))
    throw Error(ErrorCode::IoFailure, root.string() + " is not a directory");

  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    std::string file = entry.path().filename().string();
    if (ends_with(file, ".alo.json"))
      names.insert(file.substr(0, file.size() - 9));
    else if (ends_with(file, ".alo.md"))
      names.insert(file.substr(0, file.size() - 7));
  }
  if (ec) throw Error(ErrorCode::IoFailure, "cannot list " + root.string() + ": " + ec.message());

  std::map<std::string, ALO> loaded;
  for (const auto& name : names) {
    fs::path jp = json_path(root, name);
    fs::path mp = markdown_path(root, name);
    auto json_text = io::read_file(jp);
    auto md_text = io::read_file(mp);

    std::optional<ALO> from_md;
    std::string md_error;
    if (md_text) {
      try {
        from_md = script::parse_canonical(*md_text);
      } catch (const Error& e) {
        md_error = e.what();
      }
    }

    std::optional<ALO> alo;
    if (json_text) {
      try {
        alo = alo_from_json(nlohmann::json::parse(*json_text));
      } catch (const nlohmann::json::exception& e) {
        result.issues.push_back({ErrorCode::CorruptEntry, name, jp, e.what()});
        continue;
      } catch (const Error& e) {
        result.issues.push_back({ErrorCode::CorruptEntry, name, jp, e.what()});
        continue;
      }
      if (!md_text)
        result.warnings.push_back({name, "markdown file missing"});
      else if (!from_md)
        result.warnings.push_back({name, "markdown does not parse (" + md_error + "); using JSON"});
      else if (!structurally_equal(*from_md, *alo))
        result.warnings.push_back({name, "markdown diverges from JSON sidecar; using JSON"});
    } else if (from_md) {
      alo = from_md;
      result.warnings.push_back({name, "JSON sidecar missing; loaded from markdown"});
    } else {
      result.issues.push_back({ErrorCode::CorruptEntry, name, mp, md_error});
      continue;
    }

    if (alo->name != name) {
      result.issues.push_back({ErrorCode::CorruptEntry, name, jp,
                               "file holds ALO named '" + alo->name + "'"});
      continue;
    }
    if (ValidationReport r = validate(*alo); !r.ok()) {
      result.issues.push_back({ErrorCode::InvalidALO, name, jp, r.to_string()});
      continue;
    }
    loaded.emplace(name, std::move(*alo));
  }

  // Drop entries whose references dangle until the set is closed.
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = loaded.begin(); it != loaded.end();) {
      ValidationReport refs = check_references(it->second, loaded);
      if (refs.ok()) {
        ++it;
        continue;
      }
      result.issues.push_back({ErrorCode::CrossReferenceBroken, it->first,
                               json_path(root, it->first), refs.to_string()});
      it = loaded.erase(it);
      changed = true;
    }
  }
  result.registry.entries_ = std::move(loaded);
  return result;
}

}  // namespace alo
