#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "alo/app.hpp"
#include "alo/codegen.hpp"
#include "alo/io.hpp"
#include "alo/prompt.hpp"
#include "alo/script.hpp"

namespace alo::app {

namespace fs = std::filesystem;
using nlohmann::json;
using gateway::Message;
using gateway::Role;

gateway::Completion RecordingBackend::complete(const gateway::ChatRequest& req) const {
  auto c = inner_.complete(req);
  std::lock_guard lock(mu_);
  log_.push_back({req, c.content});
  return c;
}

std::vector<gateway::EmbeddingVector> RecordingBackend::embed(const std::vector<std::string>& texts) const {
  return inner_.embed(texts);
}

std::vector<Exchange> RecordingBackend::take() {
  std::lock_guard lock(mu_);
  return std::exchange(log_, {});
}

std::string alo_text_from_reply(const std::string& reply) {
  for (const auto& b : script::extract_code_blocks(reply))
    if ((b.language.empty() || b.language == "markdown" || b.language == "md") &&
        b.body.find("ALO:") != std::string::npos)
      return b.body + "\n";
  return reply;
}

fs::path new_run_dir(const fs::path& root, const std::string& command) {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
  std::string base = std::string(stamp) + "-" + command;
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + root.string() + ": " + ec.message());
  for (int k = 1;; ++k) {
    fs::path dir = root / (k == 1 ? base : base + "-" + std::to_string(k));
    if (fs::create_directory(dir, ec)) return dir;
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
  }
}

sim::Scenario default_scenario(const Registry& reg, std::uint64_t seed) {
  sim::Scenario s;
  s.seed = seed;
  std::vector<std::string> names;
  for (const auto& name : reg.names())
    if (reg.get(name).interactions.empty()) names.push_back(name);
  const auto& b = s.bounds;
  double width = b.max.x - b.min.x;
  for (std::size_t i = 0; i < names.size(); ++i) {
    double x = b.min.x + width * static_cast<double>(i + 1) / static_cast<double>(names.size() + 1);
    s.entities.push_back({names[i], {x, b.min.y, (b.min.z + b.max.z) / 2}});
  }
  return s;
}

namespace {

json transcript_line(const Exchange& e) {
  json messages = json::array();
  for (const auto& m : e.request.messages) messages.push_back({{"role", gateway::to_string(m.role)}, {"content", m.content}});
  json request = {{"messages", messages}, {"temperature", e.request.temperature}, {"seed", e.request.seed}};
  if (e.request.max_tokens) request["max_tokens"] = *e.request.max_tokens;
  return {{"request", request}, {"response", e.response}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

Session::Session(Options options, std::ostream& out, std::ostream& err,
                 std::shared_ptr<const gateway::Backend> backend)
    : options_(std::move(options)), out_(out), err_(err), backend_(std::move(backend)) {
  auto loaded = Registry::load(options_.registry);
  for (const auto& issue : loaded.issues)
    err_ << "warning: skipped " << issue.file.string() << ": " << issue.message << "\n";
  for (const auto& w : loaded.warnings) err_ << "warning: " << w.name << ": " << w.message << "\n";
  registry_ = std::move(loaded.registry);
}

const gateway::Backend& Session::backend() {
  if (!backend_) backend_ = gateway::make_backend(options_.backend);
  return *backend_;
}

void Session::write_transcript(const fs::path& dir, const std::vector<Exchange>& exchanges) {
  std::string text;
  for (const auto& e : exchanges) text += transcript_line(e).dump() + "\n";
  io::write_file(dir / "transcript.jsonl", text);
}

std::vector<std::string> Session::converse(const std::string& command, const std::vector<std::string>& user_turns) {
  RecordingBackend recorder(backend());
  fs::path dir = new_run_dir(options_.runs, command);
  std::vector<Message> messages{{Role::system, prompt::system_prompt(prompt::SystemVariant::markdown)}};
  std::vector<std::string> replies;
  try {
    for (const auto& turn : user_turns) {
      messages.push_back({Role::user, turn});
      gateway::ChatRequest req;
      req.messages = messages;
      req.temperature = options_.temperature;
      req.seed = options_.seed.value_or(0);
      replies.push_back(recorder.complete(req).content);
      messages.push_back({Role::assistant, replies.back()});
    }
  } catch (...) {
    write_transcript(dir, recorder.take());
    err_ << "transcript: " << (dir / "transcript.jsonl").string() << "\n";
    throw;
  }
  write_transcript(dir, recorder.take());
  err_ << "transcript: " << (dir / "transcript.jsonl").string() << "\n";
  return replies;
}

void Session::check_new(const std::string& name) const {
  if (registry_.contains(name) && !options_.force)
    throw Error(ErrorCode::InvalidRequest, "'" + name + "' is already registered; pass --force to replace it");
}

ALO Session::store(ALO alo, const std::string& expected_name) {
  if (alo.name != expected_name) {
    err_ << "warning: reply named the object '" << alo.name << "'; storing it as '" << expected_name << "'\n";
    alo.name = expected_name;
  }
  registry_.put(alo);
  registry_.save();
  out_ << script::serialize(alo);
  err_ << "saved " << markdown_path(registry_.root(), alo.name).string() << "\n";
  return alo;
}

ALO Session::create(const std::string& name) {
  if (name.find_first_not_of(" \t") == std::string::npos) throw UsageError("create: the name must not be empty");
  check_new(name);
  auto replies = converse("create", {prompt::creation_prompt(name)});
  return store(script::parse_alo_markdown(alo_text_from_reply(replies[0])), name);
}

ALO Session::interact(const std::string& a, const std::string& b, const std::optional<std::string>& context) {
  std::string user = prompt::interaction_prompt(registry_, a, b, context);
  std::string name = prompt::pair_name(a, b);
  check_new(name);
  auto replies = converse("interact", {user});
  return store(script::parse_alo_markdown(alo_text_from_reply(replies[0])), name);
}

ALO Session::brainstorm(const std::string& name) {
  if (name.find_first_not_of(" \t") == std::string::npos) throw UsageError("brainstorm: the name must not be empty");
  check_new(name);
  auto replies = converse("brainstorm", prompt::brainstorm_sequence(name));
  auto table = script::parse_parameter_table(replies.back());
  return store(script::alo_from_parameter_table(name, table), name);
}

sim::Scenario Session::scenario(const std::optional<fs::path>& file) const {
  if (!file) return default_scenario(registry_, options_.seed.value_or(0));
  auto text = io::read_file(*file);
  if (!text) throw Error(ErrorCode::IoFailure, "cannot read " + file->string());
  json j = json::parse(*text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, file->string() + ": not valid JSON");
  sim::Scenario s = sim::scenario_from_json(j);
  if (options_.seed) s.seed = *options_.seed;
  return s;
}

sim::Trace Session::simulate(const std::optional<fs::path>& scenario_file, std::int64_t ticks) {
  if (ticks < 0) throw UsageError("simulate: ticks must be non-negative");
  sim::Scenario s = scenario(scenario_file);
  sim::World world = sim::build_world(registry_, s);
  sim::Trace trace = world.run(ticks, s.dt);
  ensure_dir(options_.out);
  io::write_file(options_.out / "scenario.json", sim::to_json(s).dump(2) + "\n");
  io::write_file(options_.out / "trace.jsonl", trace.steps_jsonl());
  io::write_file(options_.out / "trace.snapshots.jsonl", trace.snapshots_jsonl());
  out_ << ticks << " ticks, " << world.entities().size() << " entities, " << trace.steps.size()
       << " step records -> " << (options_.out / "trace.jsonl").string() << "\n";
  return trace;
}

std::vector<fs::path> Session::export_scene(const std::optional<fs::path>& scenario_file) {
  sim::Scenario s = scenario(scenario_file);
  codegen::SceneBundle bundle = codegen::emit_scene(registry_, s);
  json j = codegen::to_json(bundle);
  if (auto errors = codegen::bundle_errors(j); !errors.empty())
    throw Error(ErrorCode::ValidationFailed, "scene bundle: " + errors.front());

  ensure_dir(options_.out);
  std::vector<fs::path> written{options_.out / "scene.bundle.json"};
  io::write_file(written[0], j.dump(2) + "\n");
  std::vector<std::string> scripted;
  for (const auto& m : bundle.manifests) scripted.push_back(m.alo_name);
  for (const auto& name : registry_.names()) {
    const ALO alo = registry_.get(name);
    for (const auto& rule : alo.interactions)
      if (std::find(bundle.rules.begin(), bundle.rules.end(), rule) != bundle.rules.end()) {
        scripted.push_back(name);
        break;
      }
  }
  for (const auto& name : scripted) {
    fs::path p = options_.out / codegen::script_file_name(name);
    io::write_file(p, codegen::emit_update_script(registry_.get(name)));
    written.push_back(p);
  }
  for (const auto& p : written) out_ << p.string() << "\n";
  return written;
}

fs::path Session::analyze(const lab::RunConfig& config) {
  std::shared_ptr<const gateway::Backend> chosen = backend_;
  if (!chosen || chosen->kind() != config.backend) chosen = gateway::make_backend(config.backend);
  RecordingBackend recorder(*chosen);
  fs::path dir = new_run_dir(options_.runs, "analyze");
  std::vector<lab::TemperatureRun> runs;
  try {
    runs = lab::analyze(recorder, config);
  } catch (...) {
    write_transcript(dir, recorder.take());
    throw;
  }
  write_transcript(dir, recorder.take());
  lab::write_analysis(dir, config, runs);
  for (const auto& r : runs)
    out_ << "T=" << lab::temperature_label(r.trials.temperature) << " n=" << r.trials.trials.size() << " mean="
         << std::fixed << std::setprecision(6) << r.stats.mean << " sd=" << r.stats.sd << std::defaultfloat << "\n";
  out_ << "results: " << dir.string() << "\n";
  return dir;
}

void Session::image_prompt(const std::string& name, const std::string& suffix) {
  if (!registry_.contains(name)) throw Error(ErrorCode::UnknownName, "'" + name + "' is not registered");
  ALO alo = registry_.get(name);
  out_ << prompt::image_prompt(alo, suffix) << "\n";
  auto c = prompt::classify_parameters(alo);
  std::size_t visual = 0, performance = 0;
  for (const auto& [key, cls] : c.classes) {
    if (cls.label == prompt::ParameterLabel::visual) ++visual;
    if (cls.label == prompt::ParameterLabel::performance) ++performance;
  }
  out_ << "parameters: " << c.classes.size() << " (visual " << visual << ", performance " << performance
       << ", other " << c.classes.size() - visual - performance << ")\n";
  out_ << "visual coverage: ";
  if (c.visual_coverage)
    out_ << std::fixed << std::setprecision(3) << *c.visual_coverage << std::defaultfloat << "\n";
  else
    out_ << "n/a (no states)\n";
  for (const auto& [key, cls] : c.classes) {
    out_ << "  " << key << ": " << prompt::to_string(cls.label);
    if (!cls.matched_keyword.empty()) out_ << " (" << cls.matched_keyword << ")";
    out_ << "\n";
  }
}

}  // namespace alo::app
