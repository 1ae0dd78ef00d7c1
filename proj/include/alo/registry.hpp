#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "alo/model.hpp"

namespace alo {

// A diagnostic produced while loading; loading never drops an entry silently.
struct LoadIssue {
  ErrorCode code;  // CorruptEntry, CrossReferenceBroken or InvalidALO
  std::string name;
  std::filesystem::path file;
  std::string message;
};

struct LoadWarning {
  std::string name;
  std::string message;
};

// Named collection of ALOs. Every successful put leaves all entries valid,
// including cross-ALO references made by interaction rules.
//
// Single writer: put/save need exclusive access; get/contains/names may run
// concurrently with each other.
class Registry {
 public:
  Registry() = default;
  explicit Registry(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  // Stores or replaces alo under alo.name, then re-validates every entry.
  // Atomic: on failure the registry is unchanged.
  // Throws Error{InvalidALO} or Error{CrossReferenceBroken}.
  void put(ALO alo);

  // Throws Error{NotFound}.
  ALO get(const std::string& name) const;

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  std::size_t size() const { return entries_.size(); }
  std::vector<std::string> names() const;
  bool dirty(const std::string& name) const { return dirty_.count(name) > 0; }

  // Writes <root>/<name>.alo.md and <root>/<name>.alo.json for every entry.
  // Throws Error{IoFailure}.
  void save();

  struct LoadResult;
  static LoadResult load(const std::filesystem::path& root);

  friend bool operator==(const Registry& a, const Registry& b) { return a.entries_ == b.entries_; }

 private:
  std::filesystem::path root_;
  std::map<std::string, ALO> entries_;
  std::set<std::string> dirty_;
};

struct Registry::LoadResult {
  Registry registry;
  std::vector<LoadIssue> issues;
  std::vector<LoadWarning> warnings;
};

// Cross-ALO problems for `alo` given the other entries, as violations with
// code CrossReferenceBroken.
ValidationReport check_references(const ALO& alo, const std::map<std::string, ALO>& entries);

std::filesystem::path markdown_path(const std::filesystem::path& root, const std::string& name);
std::filesystem::path json_path(const std::filesystem::path& root, const std::string& name);

}  // namespace alo
