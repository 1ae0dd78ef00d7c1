#pragma once

// Response-variability experiments: repeated completions of one prompt,
// embedded and compared pairwise by cosine similarity.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alo/gateway.hpp"

namespace alo::lab {

// a.b / (|a||b|), clamped to [-1, 1]. Throws Error{DimensionMismatch},
// Error{ZeroNorm}.
double cosine(const std::vector<double>& a, const std::vector<double>& b);
double cosine(const gateway::EmbeddingVector& a, const gateway::EmbeddingVector& b);

struct Trial {
  std::size_t index = 0;
  std::string completion;
  gateway::EmbeddingVector embedding;
};

struct TrialSet {
  std::string prompt;
  std::string system_prompt;  // empty: no system message was sent
  double temperature = 0.7;
  std::vector<Trial> trials;  // trials[i].index == i
};

struct TrialOptions {
  std::uint64_t seed = 0;      // trial i asks the backend with seed + i
  std::size_t max_in_flight = 4;
  int max_attempts = 3;        // per trial, counting the first
  std::optional<int> max_tokens;
};

// n completions and their embeddings, in index order whatever order they
// finish in. Failed or empty completions are retried; the indices still
// failing after max_attempts are reported together.
// Throws Error{PreconditionFailed} (n < 2), Error{InvalidRequest}
// (temperature outside [0, 2]), TrialFailed, and whatever embed() throws.
TrialSet run_trials(const gateway::Backend& backend, const std::string& system_prompt,
                    const std::string& user_prompt, int n, double temperature,
                    const TrialOptions& options = {});

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  // Throws Error{PreconditionFailed} unless cells.size() == n * n.
  SimilarityMatrix(std::size_t n, std::vector<double> cells);

  std::size_t n() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  const std::vector<double>& cells() const { return cells_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> cells_;  // row-major
};

// Throws Error{PreconditionFailed} for fewer than two vectors, plus the
// cosine errors.
SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& vectors);
SimilarityMatrix similarity_matrix(const TrialSet& t);

struct SimilaritySummary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD; 0 when there is a single cell
  std::size_t count = 0;
};

// Over the strict lower triangle. Throws Error{PreconditionFailed} (n < 2).
SimilaritySummary summary(const SimilarityMatrix& m);

// Full matrix, one row per line, "%.9f" cells.
std::string to_csv(const SimilarityMatrix& m);
// Binary PGM (P5), 8-bit. Lower triangle and diagonal map [0,1] to
// [255,0] after clamping; the upper triangle is 255.
std::string to_pgm(const SimilarityMatrix& m);

// Throw Error{IoFailure}.
void export_csv(const SimilarityMatrix& m, const std::filesystem::path& path);
void export_heatmap(const SimilarityMatrix& m, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run configuration and the analysis pipeline behind `alo analyze`.

struct RunConfig {
  std::string system_prompt_variant = "none";  // none | markdown | codegen
  std::string user_prompt = "Define banana in 300 words.";
  int n = 20;
  std::vector<double> temperatures{0.7};
  gateway::BackendKind backend = gateway::BackendKind::mock;
  std::uint64_t seed = 0;
};

// Keys as in the config file: system_prompt_variant, user_prompt, n,
// temperatures, backend, seed. Absent keys keep the defaults except
// `temperatures`, which becomes {0.0, 0.7, 2.0}. Throws
// Error{ValidationFailed} for wrong types, unknown keys or values out of
// range.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& c);

// The system prompt for a variant; empty for "none". Throws
// Error{ValidationFailed} for an unknown variant.
std::string variant_system_prompt(const std::string& variant);

// "0.0", "0.7", "2.0": shortest round-trip form with at least one decimal.
std::string temperature_label(double t);

struct TemperatureRun {
  TrialSet trials;
  SimilarityMatrix matrix;
  SimilaritySummary stats;
};

// options.seed is replaced by config.seed.
std::vector<TemperatureRun> analyze(const gateway::Backend& backend, const RunConfig& config,
                                    const TrialOptions& options = {});

// trials.jsonl, matrix_<label>.csv, matrix_<label>.pgm and summary.json in
// `dir` (created if needed). Returns the paths written. Throws
// Error{IoFailure}.
std::vector<std::filesystem::path> write_analysis(const std::filesystem::path& dir, const RunConfig& config,
                                                  const std::vector<TemperatureRun>& runs);

nlohmann::json summary_json(const RunConfig& config, const std::vector<TemperatureRun>& runs);

}  // namespace alo::lab
