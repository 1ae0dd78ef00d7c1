#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "alo/lab.hpp"

using namespace alo;
using namespace alo::lab;
using nlohmann::json;
namespace fs = std::filesystem;
using Vectors = std::vector<std::vector<double>>;

namespace {

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string golden(const std::string& name) { return read(fs::path(ALO_TESTDATA_DIR) / "golden" / name); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidRequest;
}

// Written independently of the library: normalise each side first, then
// take the dot product in long double.
double oracle_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double na = 0, nb = 0;
  for (double x : a) na += static_cast<long double>(x) * x;
  for (double x : b) nb += static_cast<long double>(x) * x;
  long double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += (a[i] / std::sqrt(na)) * (b[i] / std::sqrt(nb));
  return static_cast<double>(dot);
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(dim);
  for (;;) {
    for (auto& x : v) x = g(rng);
    for (double x : v)
      if (x != 0.0) return v;
  }
}

SimilarityMatrix from_lower(std::size_t n, const std::vector<double>& lower) {
  std::vector<double> cells(n * n, 1.0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) cells[i * n + j] = cells[j * n + i] = lower[k++];
  return SimilarityMatrix(n, cells);
}

// Fails the first `failures[seed]` calls for a given request seed.
class FlakyBackend final : public gateway::Backend {
 public:
  explicit FlakyBackend(std::map<std::uint64_t, int> failures) : failures_(std::move(failures)) {}
  gateway::BackendKind kind() const override { return gateway::BackendKind::mock; }
  gateway::Completion complete(const gateway::ChatRequest& req) const override {
    ++calls;
    {
      std::lock_guard lock(mu_);
      auto it = failures_.find(req.seed);
      if (it != failures_.end() && it->second > 0) {
        --it->second;
        throw Error(ErrorCode::RateLimited, "busy");
      }
    }
    return inner_.complete(req);
  }
  std::vector<gateway::EmbeddingVector> embed(const std::vector<std::string>& texts) const override {
    return inner_.embed(texts);
  }
  mutable std::atomic<int> calls{0};

 private:
  gateway::MockBackend inner_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, int> failures_;
};

const std::string kBanana = "Define banana in 300 words.";

}  // namespace

TEST(Cosine, WorkedExamples) {
  EXPECT_DOUBLE_EQ(cosine({1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(cosine({1, 0}, {0, 1}), 0.0);
  EXPECT_NEAR(cosine({1, 1}, {1, 0}), 0.70710678, 1e-8);
  EXPECT_DOUBLE_EQ(cosine({1, 2, 3}, {-1, -2, -3}), -1.0);
}

TEST(Cosine, Errors) {
  EXPECT_EQ(code_of([] { cosine({1, 2}, {1, 2, 3}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { cosine({0, 0}, {1, 2}); }), ErrorCode::ZeroNorm);
  EXPECT_EQ(code_of([] { cosine({1, 2}, {0, 0}); }), ErrorCode::ZeroNorm);
}

TEST(Cosine, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<std::size_t> dims(2, 1536);
  for (int i = 0; i < 300; ++i) {
    std::size_t d = dims(rng);
    auto a = random_vector(rng, d), b = random_vector(rng, d);
    double c = cosine(a, b);
    ASSERT_NEAR(c, oracle_cosine(a, b), 1e-12) << "dim " << d;
    ASSERT_LE(std::abs(c), 1.0);
    ASSERT_DOUBLE_EQ(c, cosine(b, a));
  }
}

TEST(Cosine, ScaleInvariant) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    auto a = random_vector(rng, 16), b = random_vector(rng, 16);
    auto a3 = a;
    for (auto& x : a3) x *= 3.5;
    EXPECT_NEAR(cosine(a, b), cosine(a3, b), 1e-12);
  }
}

TEST(Matrix, MatchesBruteForceDoubleLoop) {
  std::mt19937_64 rng(7);
  std::vector<std::vector<double>> vs;
  for (int i = 0; i < 5; ++i) vs.push_back(random_vector(rng, 64));
  auto m = similarity_matrix(vs);
  ASSERT_EQ(m.n(), 5u);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(m.at(i, j), oracle_cosine(vs[i], vs[j]), 1e-12);
}

TEST(Matrix, PropertiesOverRandomTrialSets) {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> sizes(2, 24), dims(2, 300);
  for (int s = 0; s < 100; ++s) {
    std::size_t n = sizes(rng), d = dims(rng);
    TrialSet t;
    for (std::size_t i = 0; i < n; ++i) t.trials.push_back({i, "x", {random_vector(rng, d), 0}});
    // Duplicate a trial now and then so exact-one cells appear off the diagonal.
    if (s % 3 == 0) t.trials[n - 1].embedding = t.trials[0].embedding;
    auto m = similarity_matrix(t);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_NEAR(m.at(i, i), 1.0, 1e-9);
      for (std::size_t j = 0; j < n; ++j) {
        ASSERT_LE(std::abs(m.at(i, j) - m.at(j, i)), 1e-12);
        ASSERT_GE(m.at(i, j), -1.0);
        ASSERT_LE(m.at(i, j), 1.0);
        ASSERT_NEAR(m.at(i, j), oracle_cosine(t.trials[i].embedding.values, t.trials[j].embedding.values), 1e-12);
      }
    }
    auto sum = summary(m);
    EXPECT_EQ(sum.count, n * (n - 1) / 2);
    EXPECT_GE(sum.sd, 0.0);
  }
}

TEST(Matrix, IdenticalAndOrthogonal) {
  std::vector<std::vector<double>> same(20, {0.3, -0.2, 0.9});
  auto m = similarity_matrix(same);
  for (double c : m.cells()) EXPECT_NEAR(c, 1.0, 1e-12);
  auto o = similarity_matrix(Vectors{{1, 0}, {0, 1}});
  EXPECT_EQ(o.at(0, 1), 0.0);
  EXPECT_EQ(o.at(1, 0), 0.0);
}

TEST(Matrix, Preconditions) {
  EXPECT_EQ(code_of([] { similarity_matrix(Vectors{{1, 0}}); }),
            ErrorCode::PreconditionFailed);
  EXPECT_EQ(code_of([] { similarity_matrix(Vectors{{1, 0}, {0, 0}}); }), ErrorCode::ZeroNorm);
  EXPECT_EQ(code_of([] { similarity_matrix(Vectors{{1, 0}, {0, 1, 2}}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { SimilarityMatrix(2, {1, 0, 0}); }), ErrorCode::PreconditionFailed);
}

TEST(Summary, HandComputedLowerTriangle) {
  // Upper triangle deliberately disagrees: it must not be read.
  SimilarityMatrix m(3, {1, 0, 0, 0.9, 1, 0, 0.8, 0.7, 1});
  auto s = summary(m);
  EXPECT_NEAR(s.mean, 0.8, 1e-12);
  EXPECT_NEAR(s.sd, 0.1, 1e-12);
  EXPECT_EQ(s.count, 3u);
}

TEST(Summary, AllOnesAndSingleCell) {
  auto s = summary(from_lower(5, std::vector<double>(10, 1.0)));
  EXPECT_EQ(s.mean, 1.0);
  EXPECT_EQ(s.sd, 0.0);
  auto one = summary(from_lower(2, {0.4}));
  EXPECT_DOUBLE_EQ(one.mean, 0.4);
  EXPECT_EQ(one.sd, 0.0);
  EXPECT_EQ(code_of([] { summary(SimilarityMatrix(1, {1})); }), ErrorCode::PreconditionFailed);
}

TEST(Summary, MatchesTwoPassOracle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    std::size_t n = 2 + k % 12;
    std::vector<double> lower(n * (n - 1) / 2);
    for (auto& x : lower) x = u(rng);
    long double mean = 0;
    for (double x : lower) mean += x;
    mean /= lower.size();
    long double ss = 0;
    for (double x : lower) ss += (x - mean) * (x - mean);
    double sd = lower.size() > 1 ? std::sqrt(static_cast<double>(ss / (lower.size() - 1))) : 0.0;
    auto s = summary(from_lower(n, lower));
    EXPECT_NEAR(s.mean, static_cast<double>(mean), 1e-12);
    EXPECT_NEAR(s.sd, sd, 1e-12);
  }
}

TEST(Export, CsvGoldens) {
  EXPECT_EQ(to_csv(similarity_matrix(Vectors{{2, 0}, {5, 0}})), golden("ones2.csv"));
  EXPECT_EQ(to_csv(from_lower(3, {0.5, 0.25, -0.3})), golden("mixed3.csv"));
}

TEST(Export, HeatmapGoldensAndEndpoints) {
  EXPECT_EQ(to_pgm(from_lower(3, {0.5, 0.25, -0.3})), golden("mixed3.pgm"));
  std::string pgm = to_pgm(from_lower(4, std::vector<double>(6, 1.0)));
  std::string header = "P5\n4 4\n255\n";
  ASSERT_EQ(pgm.size(), header.size() + 16);
  EXPECT_EQ(pgm.substr(0, header.size()), header);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      EXPECT_EQ(static_cast<unsigned char>(pgm[header.size() + i * 4 + j]), j > i ? 255 : 0) << i << "," << j;
}

TEST(Export, FilesAreByteIdenticalOnReexport) {
  auto dir = fs::temp_directory_path() / "alo_lab_export";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto m = from_lower(3, {0.5, 0.25, -0.3});
  export_csv(m, dir / "a.csv");
  export_heatmap(m, dir / "a.pgm");
  std::string csv = read(dir / "a.csv"), pgm = read(dir / "a.pgm");
  export_csv(m, dir / "a.csv");
  export_heatmap(m, dir / "a.pgm");
  EXPECT_EQ(read(dir / "a.csv"), csv);
  EXPECT_EQ(read(dir / "a.pgm"), pgm);
  EXPECT_EQ(pgm, golden("mixed3.pgm"));
  EXPECT_EQ(code_of([&] { export_csv(m, dir / "missing" / "a.csv"); }), ErrorCode::IoFailure);
  fs::remove_all(dir);
}

TEST(Trials, MockAtZeroIsIdentical) {
  gateway::MockBackend mock;
  auto t = run_trials(mock, "", kBanana, 20, 0.0);
  ASSERT_EQ(t.trials.size(), 20u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(t.trials[i].index, i);
    EXPECT_EQ(t.trials[i].completion, t.trials[0].completion);
    EXPECT_EQ(t.trials[i].embedding.values.size(), 1536u);
  }
  auto s = summary(similarity_matrix(t));
  EXPECT_NEAR(s.mean, 1.0, 1e-12);
  EXPECT_NEAR(s.sd, 0.0, 1e-12);
}

TEST(Trials, Preconditions) {
  gateway::MockBackend mock;
  EXPECT_EQ(code_of([&] { run_trials(mock, "", kBanana, 1, 0.0); }), ErrorCode::PreconditionFailed);
  EXPECT_EQ(code_of([&] { run_trials(mock, "", kBanana, 5, 2.5); }), ErrorCode::InvalidRequest);
  EXPECT_EQ(code_of([&] { run_trials(mock, "", kBanana, 5, -0.1); }), ErrorCode::InvalidRequest);
}

TEST(Trials, SystemPromptIsSentFirst) {
  gateway::MockBackend mock;
  auto with = run_trials(mock, "Be brief.", kBanana, 2, 0.0);
  EXPECT_EQ(with.system_prompt, "Be brief.");
  EXPECT_EQ(with.prompt, kBanana);
}

TEST(Trials, ConcurrencyNeverChangesTheMatrix) {
  gateway::MockBackend mock;
  TrialOptions serial;
  serial.max_in_flight = 1;
  serial.seed = 3;
  auto reference = similarity_matrix(run_trials(mock, "", kBanana, 12, 2.0, serial));
  for (std::size_t k : {2u, 5u, 16u}) {
    TrialOptions o = serial;
    o.max_in_flight = k;
    auto t = run_trials(mock, "", kBanana, 12, 2.0, o);
    EXPECT_EQ(similarity_matrix(t).cells(), reference.cells()) << "K=" << k;
  }
}

TEST(Trials, TransientFailuresAreRetried) {
  FlakyBackend flaky({{2, 1}, {5, 2}});
  TrialOptions o;
  o.max_in_flight = 3;
  auto t = run_trials(flaky, "", kBanana, 8, 0.7, o);
  EXPECT_EQ(t.trials.size(), 8u);
  EXPECT_EQ(flaky.calls.load(), 8 + 2 + 1);
  gateway::MockBackend mock;
  EXPECT_EQ(similarity_matrix(t).cells(), similarity_matrix(run_trials(mock, "", kBanana, 8, 0.7, o)).cells());
}

TEST(Trials, PersistentFailuresReportEveryIndex) {
  FlakyBackend flaky({{1, 99}, {6, 99}, {3, 2}});
  try {
    run_trials(flaky, "", kBanana, 8, 0.7);
    FAIL() << "expected TrialFailed";
  } catch (const TrialFailed& e) {
    EXPECT_EQ(e.indices, (std::vector<std::size_t>{1, 6}));
    EXPECT_EQ(e.code, ErrorCode::TrialFailed);
  }
  EXPECT_EQ(flaky.calls.load(), 8 + 3 + 3);
}

TEST(Trials, MockMonotonicInTemperature) {
  gateway::MockBackend mock;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrialOptions o;
    o.seed = seed * 1000;
    double prev = 2.0;
    for (double temp : {0.0, 0.7, 2.0}) {
      double mean = summary(similarity_matrix(run_trials(mock, "", kBanana, 20, temp, o))).mean;
      EXPECT_LE(mean, prev) << "seed " << seed << " T=" << temp;
      prev = mean;
    }
  }
}

TEST(Config, DefaultsAndParsing) {
  RunConfig d;
  EXPECT_EQ(d.n, 20);
  EXPECT_EQ(d.temperatures, std::vector<double>{0.7});
  EXPECT_EQ(d.user_prompt, kBanana);

  auto c = run_config_from_json(json::object());
  EXPECT_EQ(c.temperatures, (std::vector<double>{0.0, 0.7, 2.0}));
  EXPECT_EQ(c.backend, gateway::BackendKind::mock);

  c = run_config_from_json(json::parse(R"({"system_prompt_variant":"markdown","user_prompt":"Define life in 300 words.",
                                            "n":5,"temperatures":[0.2],"backend":"live","seed":9})"));
  EXPECT_EQ(c.n, 5);
  EXPECT_EQ(c.backend, gateway::BackendKind::live);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(run_config_from_json(to_json(c)).user_prompt, c.user_prompt);
  EXPECT_FALSE(variant_system_prompt("markdown").empty());
  EXPECT_TRUE(variant_system_prompt("none").empty());
}

TEST(Config, Rejections) {
  for (const char* text : {R"([])", R"({"n":1})", R"({"n":"20"})", R"({"temperatures":[]})",
                           R"({"temperatures":[0.5,3]})", R"({"temperatures":[0.7,0.7]})", R"({"backend":"gpt"})",
                           R"({"seed":-1})", R"({"system_prompt_variant":"poem"})", R"({"extra":true})",
                           R"({"user_prompt":""})"})
    EXPECT_EQ(code_of([&] { run_config_from_json(json::parse(text)); }), ErrorCode::ValidationFailed) << text;
}

TEST(Config, TemperatureLabels) {
  EXPECT_EQ(temperature_label(0.0), "0.0");
  EXPECT_EQ(temperature_label(0.7), "0.7");
  EXPECT_EQ(temperature_label(2.0), "2.0");
  EXPECT_EQ(temperature_label(1.25), "1.25");
}

TEST(Analyze, MockPipelineWritesEveryArtifact) {
  gateway::MockBackend mock;
  auto config = run_config_from_json(json{{"n", 6}});
  auto runs = analyze(mock, config);
  ASSERT_EQ(runs.size(), 3u);
  EXPECT_NEAR(runs[0].stats.mean, 1.0, 1e-12);
  EXPECT_LT(runs[2].stats.mean, runs[0].stats.mean);

  auto dir = fs::temp_directory_path() / "alo_lab_analyze";
  fs::remove_all(dir);
  auto written = write_analysis(dir, config, runs);
  EXPECT_EQ(written.size(), 8u);
  for (const char* name : {"trials.jsonl", "matrix_0.0.csv", "matrix_0.7.csv", "matrix_2.0.csv", "matrix_0.0.pgm",
                           "matrix_0.7.pgm", "matrix_2.0.pgm", "summary.json"})
    EXPECT_TRUE(fs::exists(dir / name)) << name;

  std::istringstream lines(read(dir / "trials.jsonl"));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto j = json::parse(line);
    EXPECT_EQ(j["index"], count % 6);
    ++count;
  }
  EXPECT_EQ(count, 18);
  auto sum = json::parse(read(dir / "summary.json"));
  EXPECT_EQ(sum["runs"].size(), 3u);
  EXPECT_EQ(sum["runs"][1]["csv"], "matrix_0.7.csv");
  EXPECT_EQ(sum["runs"][0]["count"], 15);

  // Same config, same bytes.
  std::string csv = read(dir / "matrix_2.0.csv");
  write_analysis(dir, config, analyze(mock, config));
  EXPECT_EQ(read(dir / "matrix_2.0.csv"), csv);
  fs::remove_all(dir);
}
