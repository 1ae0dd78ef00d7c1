#pragma once

// The workflows behind the `alo` command line: create, interact,
// brainstorm, simulate, export, analyze and image-prompt, sharing one
// registry and one backend per session.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alo/gateway.hpp"
#include "alo/lab.hpp"
#include "alo/registry.hpp"
#include "alo/sim.hpp"

namespace alo::app {

// Bad invocation: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  gateway::BackendKind backend = gateway::BackendKind::mock;
  std::optional<std::uint64_t> seed;  // unset: 0, and scenario files keep their own
  std::filesystem::path registry = "registry";
  std::optional<std::filesystem::path> config;  // analyze run config
  std::filesystem::path out = "out";
  std::filesystem::path runs = "runs";
  bool force = false;
  double temperature = 0.7;
};

// Every chat round trip, for the transcript files under runs/.
struct Exchange {
  gateway::ChatRequest request;
  std::string response;
};

// Backend decorator that keeps the exchanges in call order.
class RecordingBackend final : public gateway::Backend {
 public:
  explicit RecordingBackend(const gateway::Backend& inner) : inner_(inner) {}
  gateway::BackendKind kind() const override { return inner_.kind(); }
  gateway::Completion complete(const gateway::ChatRequest& req) const override;
  std::vector<gateway::EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
  std::vector<Exchange> take();

 private:
  const gateway::Backend& inner_;
  mutable std::mutex mu_;
  mutable std::vector<Exchange> log_;
};

// The text to parse from a reply: the first fenced markdown block that
// contains "ALO:", else the whole reply.
std::string alo_text_from_reply(const std::string& reply);

// "20261016T120000Z-<command>", with "-2", "-3"... appended while taken.
std::filesystem::path new_run_dir(const std::filesystem::path& root, const std::string& command);

// Every registered ALO without interaction rules, spread evenly along x at
// mid-depth on the ground of the default bounds, in name order.
sim::Scenario default_scenario(const Registry& reg, std::uint64_t seed);

class Session {
 public:
  // Loads the registry (load issues are reported on `err`). A null backend
  // means make_backend(options.backend), created on first use.
  Session(Options options, std::ostream& out, std::ostream& err,
          std::shared_ptr<const gateway::Backend> backend = nullptr);

  const Options& options() const { return options_; }
  const Registry& registry() const { return registry_; }
  std::ostream& out() { return out_; }

  // Throws UsageError for an empty name; Error{InvalidRequest} when the
  // name exists and --force was not given; parse/validation errors.
  ALO create(const std::string& name);
  // Throws Error{UnknownName} for unregistered names.
  ALO interact(const std::string& a, const std::string& b, const std::optional<std::string>& context);
  // Brainstorm + tableize conversation, turned into a derived ALO.
  ALO brainstorm(const std::string& name);
  // Writes <out>/trace.jsonl and <out>/trace.snapshots.jsonl.
  sim::Trace simulate(const std::optional<std::filesystem::path>& scenario_file, std::int64_t ticks);
  // Writes <out>/scene.bundle.json and one update script per manifest and
  // per bound pair ALO. Returns the files written.
  std::vector<std::filesystem::path> export_scene(const std::optional<std::filesystem::path>& scenario_file);
  // Returns the run directory. Throws UsageError for a bad run config.
  std::filesystem::path analyze(const lab::RunConfig& config);
  void image_prompt(const std::string& name, const std::string& suffix);

  // Reads commands from `in` until EOF or "quit"; each line is a
  // subcommand as on the command line.
  int repl(std::istream& in);

 private:
  const gateway::Backend& backend();
  // One conversation under the markdown system prompt; every turn's reply
  // is appended before the next user turn. Writes the transcript.
  std::vector<std::string> converse(const std::string& command, const std::vector<std::string>& user_turns);
  void write_transcript(const std::filesystem::path& dir, const std::vector<Exchange>& exchanges);
  void check_new(const std::string& name) const;
  ALO store(ALO alo, const std::string& expected_name);
  sim::Scenario scenario(const std::optional<std::filesystem::path>& file) const;

  Options options_;
  std::ostream& out_;
  std::ostream& err_;
  std::shared_ptr<const gateway::Backend> backend_;
  Registry registry_;
};

// Full command line, including the program name in argv[0]. Returns the
// exit code; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::shared_ptr<const gateway::Backend> backend = nullptr, std::istream* in = nullptr);

}  // namespace alo::app
