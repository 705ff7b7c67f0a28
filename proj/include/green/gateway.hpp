#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "green/errors.hpp"

namespace green {

enum class BackendKind { openai, stub };

struct RetryPolicy {
  int max_attempts = 3;
  int base_delay_ms = 250;
  int max_delay_ms = 4000;
  bool jitter = true;
};

struct BackendConfig {
  BackendKind kind = BackendKind::openai;
  std::string endpoint;  // scheme://host:port
  std::string chat_path = "/v1/chat/completions";
  std::string embeddings_path = "/v1/embeddings";
  std::string model_name = "green";
  // Decoding is pinned to greedy temperature-0; only the length cap moves.
  int max_new_tokens = 2048;
  int max_in_flight = 4;
  RetryPolicy retry;
  std::string auth_env;  // env var holding the bearer token, optional
  std::filesystem::path cache_dir;  // empty disables the response cache
  // Stub mode: completions replayed from files keyed by replay key, and
  // embeddings derived deterministically from sentence hashes.
  std::filesystem::path stub_dir;
  int stub_embedding_dim = 64;
};

struct RawResponse {
  std::string text;
  double latency_ms = 0.0;
  bool cached = false;
  // finish_reason == "length". A state, not an error: the parser decides
  // whether a truncated analysis is still usable.
  bool truncated = false;
  std::string request_fingerprint;
};

struct BatchItem {
  bool ok = false;
  RawResponse response;
  Errc error_code = Errc::backend_unavailable;
  std::string error;
};

// The only module that speaks the wire protocol. Shareable across threads;
// bounded parallelism and the response cache are internal.
class Gateway {
 public:
  explicit Gateway(BackendConfig config);

  // Throws backend_unavailable / backend_refused. Truncation is flagged on
  // the response, never thrown.
  RawResponse complete(const std::string& prompt,
                       const std::string& replay_key = "");

  // Result order matches prompt order; at most max_in_flight outstanding;
  // per-item failures isolated.
  std::vector<BatchItem> complete_batch(
      const std::vector<std::string>& prompts,
      const std::vector<std::string>& replay_keys = {});

  // One unit-norm vector per sentence, same order. Throws
  // dimension_mismatch on inconsistent widths.
  std::vector<std::vector<double>> embed(
      const std::vector<std::string>& sentences);

  std::string completion_fingerprint(const std::string& prompt) const;
  std::string embedding_fingerprint(const std::string& sentence) const;

  const BackendConfig& config() const { return config_; }

 private:
  RawResponse complete_uncached(const std::string& prompt,
                                const std::string& replay_key,
                                const std::string& fingerprint);
  std::vector<double> embed_uncached_stub(const std::string& sentence) const;

  BackendConfig config_;
};

}  // namespace green
