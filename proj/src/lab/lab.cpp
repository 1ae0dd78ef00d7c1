#include "alo/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "alo/io.hpp"
#include "alo/prompt.hpp"

namespace alo::lab {

using nlohmann::json;
namespace fs = std::filesystem;

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch,
                "cosine of vectors with " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " components");
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw Error(ErrorCode::ZeroNorm, "cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double cosine(const gateway::EmbeddingVector& a, const gateway::EmbeddingVector& b) {
  return cosine(a.values, b.values);
}

TrialSet run_trials(const gateway::Backend& backend, const std::string& system_prompt,
                    const std::string& user_prompt, int n, double temperature, const TrialOptions& options) {
  if (n < 2) throw Error(ErrorCode::PreconditionFailed, "a trial set needs at least 2 trials, got " + std::to_string(n));
  if (!(temperature >= 0.0 && temperature <= 2.0))
    throw Error(ErrorCode::InvalidRequest, "temperature must lie in [0, 2]");
  if (options.max_attempts < 1) throw Error(ErrorCode::InvalidRequest, "max_attempts must be positive");

  std::vector<gateway::ChatRequest> requests(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto& r = requests[i];
    if (!system_prompt.empty()) r.messages.push_back({gateway::Role::system, system_prompt});
    r.messages.push_back({gateway::Role::user, user_prompt});
    r.temperature = temperature;
    r.seed = options.seed + i;
    r.max_tokens = options.max_tokens;
  }

  std::vector<std::optional<std::string>> texts(requests.size());
  std::vector<std::size_t> pending(requests.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
  std::string last_error;
  for (int attempt = 0; attempt < options.max_attempts && !pending.empty(); ++attempt) {
    std::vector<gateway::ChatRequest> batch;
    for (auto i : pending) batch.push_back(requests[i]);
    auto outcomes = gateway::complete_all(backend, batch, options.max_in_flight);
    std::vector<std::size_t> still;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const auto& o = outcomes[k];
      if (o.completion && !o.completion->content.empty()) {
        texts[pending[k]] = o.completion->content;
      } else {
        still.push_back(pending[k]);
        last_error = o.completion ? "empty completion" : o.message;
      }
    }
    pending = std::move(still);
  }
  if (!pending.empty()) {
    std::string list;
    for (auto i : pending) list += (list.empty() ? "" : ", ") + std::to_string(i);
    throw TrialFailed(pending, "trials " + list + " failed after " + std::to_string(options.max_attempts) +
                                   " attempts: " + last_error);
  }

  std::vector<std::string> inputs;
  for (auto& t : texts) inputs.push_back(*t);
  auto vectors = backend.embed(inputs);
  if (vectors.size() != inputs.size())
    throw Error(ErrorCode::MalformedResponse, "embedding count differs from trial count");

  TrialSet set{user_prompt, system_prompt, temperature, {}};
  for (std::size_t i = 0; i < inputs.size(); ++i) set.trials.push_back({i, std::move(inputs[i]), std::move(vectors[i])});
  return set;
}

SimilarityMatrix::SimilarityMatrix(std::size_t n, std::vector<double> cells) : n_(n), cells_(std::move(cells)) {
  if (cells_.size() != n_ * n_) throw Error(ErrorCode::PreconditionFailed, "matrix cell count is not n*n");
}

SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw Error(ErrorCode::PreconditionFailed, "a similarity matrix needs at least 2 vectors");
  std::vector<double> cells(n * n);
  // Each pair is evaluated once and mirrored, so symmetry is exact.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) cells[i * n + j] = cells[j * n + i] = cosine(vectors[i], vectors[j]);
  return SimilarityMatrix(n, std::move(cells));
}

SimilarityMatrix similarity_matrix(const TrialSet& t) {
  std::vector<std::vector<double>> vectors;
  for (const auto& trial : t.trials) vectors.push_back(trial.embedding.values);
  return similarity_matrix(vectors);
}

SimilaritySummary summary(const SimilarityMatrix& m) {
  if (m.n() < 2) throw Error(ErrorCode::PreconditionFailed, "summary needs at least a 2x2 matrix");
  SimilaritySummary s;
  double sum = 0.0;
  for (std::size_t i = 1; i < m.n(); ++i)
    for (std::size_t j = 0; j < i; ++j) sum += m.at(i, j);
  s.count = m.n() * (m.n() - 1) / 2;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double sq = 0.0;
    for (std::size_t i = 1; i < m.n(); ++i)
      for (std::size_t j = 0; j < i; ++j) sq += (m.at(i, j) - s.mean) * (m.at(i, j) - s.mean);
    s.sd = std::sqrt(sq / static_cast<double>(s.count - 1));
  }
  return s;
}

std::string to_csv(const SimilarityMatrix& m) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = 0; j < m.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.9f", m.at(i, j));
      if (j) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string to_pgm(const SimilarityMatrix& m) {
  std::string out = "P5\n" + std::to_string(m.n()) + " " + std::to_string(m.n()) + "\n255\n";
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j > i) {
        out += static_cast<char>(255);
        continue;
      }
      double v = std::clamp(m.at(i, j), 0.0, 1.0);
      out += static_cast<char>(static_cast<unsigned char>(std::lround((1.0 - v) * 255.0)));
    }
  return out;
}

void export_csv(const SimilarityMatrix& m, const fs::path& path) { io::write_file(path, to_csv(m)); }
void export_heatmap(const SimilarityMatrix& m, const fs::path& path) { io::write_file(path, to_pgm(m)); }

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_config(const std::string& what) {
  throw Error(ErrorCode::ValidationFailed, "run config: " + what);
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) bad_config("expected a JSON object");
  static const std::set<std::string> known{"system_prompt_variant", "user_prompt", "n", "temperatures", "backend", "seed"};
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) bad_config("unknown key '" + k + "'");

  RunConfig c;
  c.temperatures = {0.0, 0.7, 2.0};
  if (j.contains("system_prompt_variant")) {
    if (!j["system_prompt_variant"].is_string()) bad_config("system_prompt_variant must be a string");
    c.system_prompt_variant = j["system_prompt_variant"];
    variant_system_prompt(c.system_prompt_variant);
  }
  if (j.contains("user_prompt")) {
    if (!j["user_prompt"].is_string() || j["user_prompt"].get<std::string>().empty())
      bad_config("user_prompt must be a non-empty string");
    c.user_prompt = j["user_prompt"];
  }
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) bad_config("n must be an integer");
    if (j["n"].get<long long>() < 2 || j["n"].get<long long>() > 1000) bad_config("n must lie in [2, 1000]");
    c.n = j["n"];
  }
  if (j.contains("temperatures")) {
    const auto& t = j["temperatures"];
    if (!t.is_array() || t.empty()) bad_config("temperatures must be a non-empty array");
    c.temperatures.clear();
    std::set<std::string> labels;
    for (const auto& v : t) {
      if (!v.is_number()) bad_config("temperatures must be numbers");
      double x = v;
      if (!(x >= 0.0 && x <= 2.0)) bad_config("temperatures must lie in [0, 2]");
      if (!labels.insert(temperature_label(x)).second) bad_config("duplicate temperature " + temperature_label(x));
      c.temperatures.push_back(x);
    }
  }
  if (j.contains("backend")) {
    if (j["backend"] == "mock")
      c.backend = gateway::BackendKind::mock;
    else if (j["backend"] == "live")
      c.backend = gateway::BackendKind::live;
    else
      bad_config("backend must be \"mock\" or \"live\"");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad_config("seed must be a non-negative integer");
    c.seed = j["seed"];
  }
  return c;
}

json to_json(const RunConfig& c) {
  return {{"system_prompt_variant", c.system_prompt_variant},
          {"user_prompt", c.user_prompt},
          {"n", c.n},
          {"temperatures", c.temperatures},
          {"backend", gateway::to_string(c.backend)},
          {"seed", c.seed}};
}

std::string variant_system_prompt(const std::string& variant) {
  if (variant == "none") return {};
  if (variant == "markdown") return prompt::system_prompt(prompt::SystemVariant::markdown);
  if (variant == "codegen") return prompt::system_prompt(prompt::SystemVariant::codegen);
  bad_config("unknown system_prompt_variant '" + variant + "'");
}

std::string temperature_label(double t) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, t);
  std::string s(buf, p);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::vector<TemperatureRun> analyze(const gateway::Backend& backend, const RunConfig& config,
                                    const TrialOptions& options) {
  TrialOptions opts = options;
  opts.seed = config.seed;
  std::string system = variant_system_prompt(config.system_prompt_variant);
  std::vector<TemperatureRun> runs;
  for (double t : config.temperatures) {
    TemperatureRun run;
    run.trials = run_trials(backend, system, config.user_prompt, config.n, t, opts);
    run.matrix = similarity_matrix(run.trials);
    run.stats = summary(run.matrix);
    runs.push_back(std::move(run));
  }
  return runs;
}

json summary_json(const RunConfig& config, const std::vector<TemperatureRun>& runs) {
  json out = json::array();
  for (const auto& r : runs) {
    std::string label = temperature_label(r.trials.temperature);
    out.push_back({{"temperature", r.trials.temperature},
                   {"n", r.trials.trials.size()},
                   {"mean", r.stats.mean},
                   {"sd", r.stats.sd},
                   {"count", r.stats.count},
                   {"csv", "matrix_" + label + ".csv"},
                   {"heatmap", "matrix_" + label + ".pgm"}});
  }
  return {{"config", to_json(config)}, {"statistic", "lower-triangle cells, sample SD"}, {"runs", out}};
}

std::vector<fs::path> write_analysis(const fs::path& dir, const RunConfig& config,
                                     const std::vector<TemperatureRun>& runs) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  std::string jsonl;
  for (const auto& r : runs)
    for (const auto& t : r.trials.trials)
      jsonl += json{{"temperature", r.trials.temperature},
                    {"index", t.index},
                    {"completion", t.completion},
                    {"embeddingDimension", t.embedding.values.size()},
                    {"sourceTextHash", t.embedding.source_text_hash}}
                   .dump() +
               "\n";
  io::write_file(dir / "trials.jsonl", jsonl);
  written.push_back(dir / "trials.jsonl");
  for (const auto& r : runs) {
    std::string label = temperature_label(r.trials.temperature);
    export_csv(r.matrix, dir / ("matrix_" + label + ".csv"));
    export_heatmap(r.matrix, dir / ("matrix_" + label + ".pgm"));
    written.push_back(dir / ("matrix_" + label + ".csv"));
    written.push_back(dir / ("matrix_" + label + ".pgm"));
  }
  io::write_file(dir / "summary.json", summary_json(config, runs).dump(2) + "\n");
  written.push_back(dir / "summary.json");
  return written;
}

}  // namespace alo::lab
