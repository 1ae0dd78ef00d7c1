#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "alo/app.hpp"
#include "alo/io.hpp"
#include "alo/script.hpp"

namespace alo::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Parameter storage for one parsed command line; `action` runs the chosen
// subcommand against a session.
struct Commands {
  std::string name, a, b, suffix = "--v 5", context, scenario, config, prompt, variant;
  std::int64_t ticks = 300;
  int n = 0;
  std::vector<double> temperatures;
  CLI::Option* context_opt = nullptr;
  CLI::Option* scenario_opt = nullptr;
  CLI::Option* config_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* prompt_opt = nullptr;
  CLI::Option* variant_opt = nullptr;
  std::function<int(Session&)> action;
};

std::optional<fs::path> optional_path(CLI::Option* opt, const std::string& value) {
  if (opt && opt->count()) return fs::path(value);
  return std::nullopt;
}

lab::RunConfig analyze_config(const Options& options, const Commands& c) {
  json j = json::object();
  std::optional<fs::path> file = optional_path(c.config_opt, c.config);
  if (!file) file = options.config;
  if (file) {
    auto text = io::read_file(*file);
    if (!text) throw UsageError("cannot read run config " + file->string());
    j = json::parse(*text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw UsageError(file->string() + ": expected a JSON object");
  } else {
    j["temperatures"] = {0.7};  // a single run at the default temperature
  }
  if (c.n_opt->count()) j["n"] = c.n;
  if (!c.temperatures.empty()) j["temperatures"] = c.temperatures;
  if (c.prompt_opt->count()) j["user_prompt"] = c.prompt;
  if (c.variant_opt->count()) j["system_prompt_variant"] = c.variant;
  if (!j.contains("seed") && options.seed) j["seed"] = *options.seed;
  if (!j.contains("backend")) j["backend"] = gateway::to_string(options.backend);
  try {
    return lab::run_config_from_json(j);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void add_commands(CLI::App& app, Commands& c, std::istream* in) {
  auto* create = app.add_subcommand("create", "Ask the model for an ALO and register it");
  create->add_option("name", c.name, "Object name, e.g. cat")->required();
  create->callback([&] { c.action = [&](Session& s) { s.create(c.name); return kExitOk; }; });

  auto* interact = app.add_subcommand("interact", "Create the pair ALO for two registered ALOs");
  interact->add_option("a", c.a)->required();
  interact->add_option("b", c.b)->required();
  c.context_opt = interact->add_option("--context", c.context, "Setting, e.g. \"bounded 3D physical world\"");
  interact->callback([&] {
    c.action = [&](Session& s) {
      std::optional<std::string> context;
      if (c.context_opt->count()) context = c.context;
      s.interact(c.a, c.b, context);
      return kExitOk;
    };
  });

  auto* brainstorm = app.add_subcommand("brainstorm", "Brainstorm parameters as a table and register the result");
  brainstorm->add_option("name", c.name)->required();
  brainstorm->callback([&] { c.action = [&](Session& s) { s.brainstorm(c.name); return kExitOk; }; });

  auto* simulate = app.add_subcommand("simulate", "Run the world and write the trace");
  simulate->add_option("ticks", c.ticks, "Number of ticks")->capture_default_str();
  c.scenario_opt = simulate->add_option("--scenario", c.scenario, "Scenario JSON (default: every plain ALO)");
  simulate->callback([&] {
    c.action = [&](Session& s) {
      s.simulate(optional_path(c.scenario_opt, c.scenario), c.ticks);
      return kExitOk;
    };
  });

  auto* exp = app.add_subcommand("export", "Write scene.bundle.json and update scripts");
  auto* exp_scenario = exp->add_option("--scenario", c.scenario, "Scenario JSON (default: every plain ALO)");
  exp->callback([&, exp_scenario] {
    c.action = [&, exp_scenario](Session& s) {
      s.export_scene(optional_path(exp_scenario, c.scenario));
      return kExitOk;
    };
  });

  auto* analyze = app.add_subcommand("analyze", "Repeated completions, embeddings and similarity matrices");
  c.config_opt = analyze->add_option("config", c.config, "Run config JSON (also --config)");
  c.n_opt = analyze->add_option("--n", c.n, "Trials per temperature");
  analyze->add_option("--temperatures", c.temperatures, "Temperatures to run");
  c.prompt_opt = analyze->add_option("--prompt", c.prompt, "User prompt");
  c.variant_opt = analyze->add_option("--variant", c.variant, "System prompt: none, markdown or codegen");
  analyze->callback([&] {
    c.action = [&](Session& s) {
      s.analyze(analyze_config(s.options(), c));
      return kExitOk;
    };
  });

  auto* image = app.add_subcommand("image-prompt", "Print the image prompt and parameter coverage");
  image->add_option("name", c.name)->required();
  image->add_option("--suffix", c.suffix, "Appended model flags")->capture_default_str();
  image->callback([&] {
    c.action = [&](Session& s) {
      s.image_prompt(c.name, c.suffix);
      return kExitOk;
    };
  });

  auto* list = app.add_subcommand("list", "List registered ALOs");
  list->callback([&] {
    c.action = [&](Session& s) {
      for (const auto& name : s.registry().names()) s.out() << name << "\n";
      return kExitOk;
    };
  });

  if (in) {
    auto* repl = app.add_subcommand("repl", "Read commands from standard input");
    repl->callback([&, in] { c.action = [in](Session& s) { return s.repl(*in); }; });
  }
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code) << "]: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

// Splits on blanks; double quotes group words, backslash escapes the next
// character inside quotes.
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, have = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '\\' && i + 1 < line.size()) cur += line[++i];
      else if (ch == '"') quoted = false;
      else cur += ch;
    } else if (ch == '"') {
      quoted = have = true;
    } else if (ch == ' ' || ch == '\t') {
      if (have) out.push_back(std::exchange(cur, {}));
      have = false;
    } else {
      cur += ch;
      have = true;
    }
  }
  if (quoted) throw UsageError("unterminated quote");
  if (have) out.push_back(cur);
  return out;
}

int parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<char*> argv;
  std::vector<std::string> copy = args;
  for (auto& a : copy) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? -1 : kExitUsage;  // -1: help was printed
  }
  return kExitOk;
}

}  // namespace

int Session::repl(std::istream& in) {
  std::string line;
  err_ << "alo> " << std::flush;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') {
      err_ << "alo> " << std::flush;
      continue;
    }
    if (line.substr(first) == "quit" || line.substr(first) == "exit") break;
    guarded(err_, [&] {
      auto tokens = split_line(line);
      tokens.insert(tokens.begin(), "alo");
      CLI::App app{"alo session command", "alo"};
      app.require_subcommand(1);
      Commands c;
      add_commands(app, c, nullptr);
      int rc = parse(app, tokens, out_, err_);
      if (rc != kExitOk) return rc < 0 ? kExitOk : rc;
      return c.action(*this);
    });
    err_ << "alo> " << std::flush;
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::shared_ptr<const gateway::Backend> backend, std::istream* in) {
  CLI::App app{"Abstract Language Objects: create, simulate, export and analyze", "alo"};
  app.fallthrough();
  app.require_subcommand(1);
  Options options;
  std::string backend_name = "mock";
  std::uint64_t seed = 0;
  std::string registry = options.registry.string(), out_dir = options.out.string(), runs = options.runs.string();
  std::string config;
  app.add_option("--backend", backend_name, "Model backend")->check(CLI::IsMember({"mock", "live"}))->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Seed for the mock backend and default scenarios");
  app.add_option("--registry", registry, "Registry directory")->capture_default_str();
  auto* config_opt = app.add_option("--config", config, "Run config for analyze");
  app.add_option("--out", out_dir, "Output directory for traces and bundles")->capture_default_str();
  app.add_option("--runs", runs, "Directory for transcripts and analysis runs")->capture_default_str();
  app.add_flag("--force", options.force, "Replace existing registry entries");
  app.add_option("--temperature", options.temperature, "Sampling temperature for create/interact/brainstorm")
      ->check(CLI::Range(0.0, 2.0))
      ->capture_default_str();

  Commands c;
  add_commands(app, c, in ? in : &std::cin);
  int rc = parse(app, args, out, err);
  if (rc != kExitOk) return rc < 0 ? kExitOk : rc;

  options.backend = backend_name == "live" ? gateway::BackendKind::live : gateway::BackendKind::mock;
  if (seed_opt->count()) options.seed = seed;
  options.registry = registry;
  options.out = out_dir;
  options.runs = runs;
  if (config_opt->count()) options.config = config;
  return guarded(err, [&] {
    Session session(options, out, err, std::move(backend));
    return c.action(session);
  });
}

}  // namespace alo::app
