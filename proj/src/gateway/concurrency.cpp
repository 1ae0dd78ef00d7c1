#include <atomic>
#include <thread>

#include "alo/gateway.hpp"

namespace alo::gateway {

std::vector<Outcome> complete_all(const Backend& backend, const std::vector<ChatRequest>& requests,
                                  std::size_t max_in_flight) {
  if (max_in_flight == 0) throw Error(ErrorCode::InvalidRequest, "max_in_flight must be positive");
  std::vector<Outcome> outcomes(requests.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < requests.size(); i = next++) {
      try {
        outcomes[i].completion = backend.complete(requests[i]);
      } catch (const Error& e) {
        outcomes[i].error = e.code;
        outcomes[i].message = e.what();
      } catch (const std::exception& e) {
        outcomes[i].error = ErrorCode::BackendError;
        outcomes[i].message = e.what();
      }
    }
  };
  std::size_t workers = std::min(max_in_flight, requests.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return outcomes;
}

}  // namespace alo::gateway
