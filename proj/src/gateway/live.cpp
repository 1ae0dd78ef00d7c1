#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "alo/gateway.hpp"

namespace alo::gateway {

namespace {

using nlohmann::json;

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

bool retryable(int status) { return status == 429 || status >= 500; }

std::string excerpt(const std::string& body) { return body.size() > 300 ? body.substr(0, 300) + "..." : body; }

}  // namespace

LiveConfig LiveConfig::from_env() {
  LiveConfig c;
  c.api_key = env_or("ALO_API_KEY", env_or("OPENAI_API_KEY", ""));
  if (c.api_key.empty()) throw Error(ErrorCode::InvalidRequest, "no API key: set ALO_API_KEY or OPENAI_API_KEY");
  c.base_url = env_or("ALO_BASE_URL", c.base_url);
  c.chat_model = env_or("ALO_CHAT_MODEL", c.chat_model);
  c.embedding_model = env_or("ALO_EMBEDDING_MODEL", c.embedding_model);
  return c;
}

LiveBackend::LiveBackend(LiveConfig config) : config_(std::move(config)) {
  const std::string& url = config_.base_url;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidRequest, "base URL needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (config_.max_attempts < 1) config_.max_attempts = 1;
}

std::string LiveBackend::post(const std::string& path, const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  auto micros = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};

  auto backoff = config_.initial_backoff;
  ErrorCode last_code = ErrorCode::BackendError;
  std::string last_message;
  int last_status = 0;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = client.Post(path_prefix_ + path, headers, body, "application/json");
    if (!res) {
      auto err = res.error();
      bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                       err == httplib::Error::Write;
      last_code = timed_out ? ErrorCode::Timeout : ErrorCode::BackendError;
      last_message = "transport failure: " + httplib::to_string(err);
      last_status = 0;
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    if (!retryable(res->status)) throw HttpError(res->status, excerpt(res->body));
    last_status = res->status;
    last_code = res->status == 429 ? ErrorCode::RateLimited : ErrorCode::HttpError;
    last_message = excerpt(res->body);
  }
  std::string tries = " after " + std::to_string(config_.max_attempts) + " attempts";
  if (last_code == ErrorCode::HttpError) throw HttpError(last_status, last_message + tries);
  if (last_code == ErrorCode::RateLimited) throw Error(last_code, "rate limited" + tries + ": " + last_message);
  throw Error(last_code, last_message + tries);
}

Completion LiveBackend::complete(const ChatRequest& req) const {
  validate(req);
  json body;
  body["model"] = config_.chat_model;
  body["messages"] = json::array();
  for (const auto& m : req.messages) body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
  body["temperature"] = req.temperature;
  if (req.max_tokens) body["max_tokens"] = *req.max_tokens;

  auto start = std::chrono::steady_clock::now();
  std::string raw = post("/v1/chat/completions", body.dump());
  Completion c;
  c.backend = BackendKind::live;
  c.latency = std::chrono::steady_clock::now() - start;
  try {
    json r = json::parse(raw);
    c.content = r.at("choices").at(0).at("message").at("content").get<std::string>();
    if (r.contains("usage") && r["usage"].is_object()) {
      const auto& u = r["usage"];
      Usage usage;
      usage.prompt_tokens = u.value("prompt_tokens", std::int64_t{0});
      usage.completion_tokens = u.value("completion_tokens", std::int64_t{0});
      usage.total_tokens = u.value("total_tokens", usage.prompt_tokens + usage.completion_tokens);
      c.usage = usage;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("chat response: ") + e.what());
  }
  return c;
}

std::vector<EmbeddingVector> LiveBackend::embed(const std::vector<std::string>& texts) const {
  if (texts.empty()) throw Error(ErrorCode::EmptyInput, "nothing to embed");
  for (std::size_t i = 0; i < texts.size(); ++i)
    if (texts[i].empty()) throw Error(ErrorCode::EmptyInput, "text " + std::to_string(i) + " is empty");
  json body{{"model", config_.embedding_model}, {"input", texts}};
  std::string raw = post("/v1/embeddings", body.dump());
  std::vector<EmbeddingVector> out(texts.size());
  try {
    json r = json::parse(raw);
    const auto& data = r.at("data");
    if (!data.is_array() || data.size() != texts.size())
      throw Error(ErrorCode::MalformedResponse, "embedding count does not match input count");
    std::vector<bool> seen(texts.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::size_t index = data[i].contains("index") ? data[i]["index"].get<std::size_t>() : i;
      if (index >= texts.size() || seen[index]) throw Error(ErrorCode::MalformedResponse, "bad embedding index");
      seen[index] = true;
      out[index].values = data[i].at("embedding").get<std::vector<double>>();
      out[index].source_text_hash = fnv1a64(texts[index]);
      if (out[index].values.empty()) throw Error(ErrorCode::MalformedResponse, "empty embedding");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, std::string("embedding response: ") + e.what());
  }
  return out;
}

std::unique_ptr<Backend> make_backend(BackendKind kind) {
  if (kind == BackendKind::mock) return std::make_unique<MockBackend>();
  return std::make_unique<LiveBackend>(LiveConfig::from_env());
}

}  // namespace alo::gateway
