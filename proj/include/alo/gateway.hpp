#pragma once

// Chat-completion and embedding backends: a live HTTP client for the
// chat-completions wire format and a deterministic offline mock.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alo/errors.hpp"

namespace alo::gateway {

enum class Role { system, user, assistant };
std::string_view to_string(Role r);

struct Message {
  Role role = Role::user;
  std::string content;
  friend bool operator==(const Message&, const Message&) = default;
};

struct ChatRequest {
  std::vector<Message> messages;
  double temperature = 0.7;           // [0, 2]
  std::uint64_t seed = 0;             // mock only; never sent on the wire
  std::optional<int> max_tokens;      // sent only when set; must be > 0
};

// Throws Error{InvalidRequest}: temperature outside [0,2] or not finite, a
// system message that is not first, max_tokens <= 0, no messages.
void validate(const ChatRequest& req);

enum class BackendKind { live, mock };
std::string_view to_string(BackendKind k);

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t total_tokens = 0;
};

struct Completion {
  std::string content;
  BackendKind backend = BackendKind::mock;
  std::chrono::nanoseconds latency{0};
  std::optional<Usage> usage;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::uint64_t source_text_hash = 0;  // fnv1a64 of the embedded text
};

// Backends are shareable: complete/embed may be called from several
// threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual BackendKind kind() const = 0;
  virtual Completion complete(const ChatRequest& req) const = 0;
  // One vector per text, in order. Throws Error{EmptyInput} for an empty
  // list or an empty text.
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const = 0;
};

// ---------------------------------------------------------------------------
// Hashing primitives shared by the mock and by tests.

std::uint64_t fnv1a64(std::string_view text);

// Maximal runs of ASCII letters/digits, lowercased.
std::vector<std::string> tokenize(std::string_view text);

// Signed feature hashing: each token adds +-1 to bucket h % dim (sign from
// the top bit of h); the sum is scaled to unit length. Text without tokens
// hashes as a single token of the whole text.
EmbeddingVector hash_embedding(std::string_view text, std::size_t dim);

// ---------------------------------------------------------------------------

struct MockOptions {
  std::size_t dimension = 1536;
  // Fraction of swappable words replaced per unit of temperature.
  double swap_rate = 0.25;
  // Adjacent list-item swaps per unit of temperature.
  double reorder_rate = 1.0;
};

// Deterministic stand-in for a chat model. Canned ALO documents for the
// bundled scenarios (cat, roomba, 3D physical world, teacher, student,
// classroom, smartphone, printer, WiFi router and their pairings), a generic
// document for other names, pipe tables for table requests and topic prose
// for anything else. At temperature T > 0 the reply gets
// round(T * swap_rate * eligible) synonym swaps and round(T * reorder_rate)
// list reorders, drawn from an RNG seeded by (seed, messages).
class MockBackend final : public Backend {
 public:
  explicit MockBackend(MockOptions options = {}) : options_(options) {}
  BackendKind kind() const override { return BackendKind::mock; }
  Completion complete(const ChatRequest& req) const override;
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
  const MockOptions& options() const { return options_; }

 private:
  MockOptions options_;
};

// ---------------------------------------------------------------------------

struct LiveConfig {
  std::string base_url = "https://api.openai.com";
  std::string api_key;
  std::string chat_model = "gpt-4";
  std::string embedding_model = "text-embedding-ada-002";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};  // doubles per retry
  std::chrono::milliseconds timeout{120000};

  // ALO_API_KEY (falling back to OPENAI_API_KEY), ALO_BASE_URL,
  // ALO_CHAT_MODEL, ALO_EMBEDDING_MODEL. Throws Error{InvalidRequest} when no
  // key is set.
  static LiveConfig from_env();
};

// POST {base}/v1/chat/completions and {base}/v1/embeddings. Retries 429, 5xx
// and transport failures with exponential backoff, resending the identical
// body. Errors: HttpError (other statuses, or 5xx after retries),
// Error{RateLimited}, Error{Timeout}, Error{BackendError} (connection),
// Error{MalformedResponse}. The key is never included in messages.
class LiveBackend final : public Backend {
 public:
  explicit LiveBackend(LiveConfig config);
  BackendKind kind() const override { return BackendKind::live; }
  Completion complete(const ChatRequest& req) const override;
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;

 private:
  std::string post(const std::string& path, const std::string& body) const;

  LiveConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

std::unique_ptr<Backend> make_backend(BackendKind kind);

// ---------------------------------------------------------------------------

struct Outcome {
  std::optional<Completion> completion;
  std::optional<ErrorCode> error;
  std::string message;
};

// Runs every request with at most max_in_flight in flight. outcomes[i]
// always answers requests[i], whatever order they finish in.
std::vector<Outcome> complete_all(const Backend& backend, const std::vector<ChatRequest>& requests,
                                  std::size_t max_in_flight);

}  // namespace alo::gateway
