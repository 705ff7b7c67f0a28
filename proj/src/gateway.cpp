#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "green/gateway.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "green/util/io.hpp"
#include "green/util/rng.hpp"
#include "green/util/sha256.hpp"

namespace green {

namespace {

using nlohmann::json;

constexpr char kFieldSep = '\x1f';

std::filesystem::path cache_path(const std::filesystem::path& dir,
                                 const std::string& fingerprint) {
  return dir / (fingerprint + ".json");
}

bool load_cached(const std::filesystem::path& dir,
                 const std::string& fingerprint, json& out) {
  if (dir.empty()) return false;
  auto path = cache_path(dir, fingerprint);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return false;
  out = json::parse(util::read_file(path), nullptr, false);
  return !out.is_discarded();
}

void store_cached(const std::filesystem::path& dir,
                  const std::string& fingerprint, const json& envelope) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  util::write_file_atomic(cache_path(dir, fingerprint), envelope.dump());
}

void sleep_with_backoff(const RetryPolicy& retry, int attempt) {
  double delay = retry.base_delay_ms * std::pow(2.0, attempt - 1);
  delay = std::min(delay, static_cast<double>(retry.max_delay_ms));
  if (retry.jitter) {
    static thread_local std::mt19937_64 rng(
        std::random_device{}() ^
        static_cast<uint64_t>(
            std::hash<std::thread::id>{}(std::this_thread::get_id())));
    delay += util::canonical_double(rng) * delay / 2.0;
  }
  std::this_thread::sleep_for(
      std::chrono::milliseconds(static_cast<long>(delay)));
}

httplib::Headers auth_headers(const BackendConfig& config) {
  httplib::Headers headers;
  if (!config.auth_env.empty()) {
    if (const char* token = std::getenv(config.auth_env.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  return headers;
}

void normalize(std::vector<double>& vec) {
  double norm = 0.0;
  for (double v : vec) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    if (!vec.empty()) vec[0] = 1.0;
    return;
  }
  for (double& v : vec) v /= norm;
}

// POST with retry on connection failures and 5xx/429; other 4xx refuse
// immediately. Returns the parsed body.
json post_json(const BackendConfig& config, const std::string& path,
               const json& body) {
  std::string payload = body.dump();
  for (int attempt = 1; attempt <= config.retry.max_attempts; ++attempt) {
    httplib::Client client(config.endpoint);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(600, 0);
    auto result =
        client.Post(path, auth_headers(config), payload, "application/json");
    if (result) {
      int status = result->status;
      if (status >= 200 && status < 300) {
        json parsed = json::parse(result->body, nullptr, false);
        if (!parsed.is_discarded()) return parsed;
        // fall through to retry: a proxy may have mangled the body
      } else if (status >= 400 && status < 500 && status != 429) {
        fail(Errc::backend_refused, config.endpoint + path + " returned " +
                                        std::to_string(status) + ": " +
                                        result->body.substr(0, 200));
      }
    }
    if (attempt < config.retry.max_attempts) {
      sleep_with_backoff(config.retry, attempt);
    }
  }
  fail(Errc::backend_unavailable,
       config.endpoint + path + " unreachable after " +
           std::to_string(config.retry.max_attempts) + " attempts");
}

}  // namespace

Gateway::Gateway(BackendConfig config) : config_(std::move(config)) {
  if (config_.max_new_tokens < 1 || config_.max_in_flight < 1) {
    fail(Errc::config_error, "max_new_tokens and max_in_flight must be >= 1");
  }
  if (config_.retry.max_attempts < 1) {
    fail(Errc::config_error, "retry.max_attempts must be >= 1");
  }
}

std::string Gateway::completion_fingerprint(const std::string& prompt) const {
  std::string material = "chat";
  material += kFieldSep;
  material += config_.endpoint;
  material += kFieldSep;
  material += config_.model_name;
  material += kFieldSep;
  material += "temperature=0;max_tokens=" +
              std::to_string(config_.max_new_tokens);
  material += kFieldSep;
  material += prompt;
  return util::sha256_hex(material);
}

std::string Gateway::embedding_fingerprint(const std::string& sentence) const {
  std::string material = "embed";
  material += kFieldSep;
  material += config_.endpoint;
  material += kFieldSep;
  material += config_.model_name;
  material += kFieldSep;
  material += sentence;
  return util::sha256_hex(material);
}

RawResponse Gateway::complete(const std::string& prompt,
                              const std::string& replay_key) {
  std::string fingerprint = completion_fingerprint(prompt);
  json cached;
  if (load_cached(config_.cache_dir, fingerprint, cached)) {
    RawResponse response;
    response.text = cached.value("text", std::string{});
    response.truncated = cached.value("truncated", false);
    response.cached = true;
    response.request_fingerprint = fingerprint;
    return response;
  }
  RawResponse response = complete_uncached(prompt, replay_key, fingerprint);
  store_cached(config_.cache_dir, fingerprint,
               json{{"text", response.text}, {"truncated", response.truncated}});
  return response;
}

RawResponse Gateway::complete_uncached(const std::string& prompt,
                                       const std::string& replay_key,
                                       const std::string& fingerprint) {
  RawResponse response;
  response.request_fingerprint = fingerprint;

  if (config_.kind == BackendKind::stub) {
    auto path = config_.stub_dir /
                ((replay_key.empty() ? fingerprint : replay_key) + ".txt");
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
      fail(Errc::backend_unavailable,
           "no stub response at " + path.string());
    }
    response.text = util::read_file(path);
    return response;
  }

  json body;
  body["model"] = config_.model_name;
  body["temperature"] = 0;
  body["max_tokens"] = config_.max_new_tokens;
  body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});

  auto start = std::chrono::steady_clock::now();
  json reply = post_json(config_, config_.chat_path, body);
  auto elapsed = std::chrono::steady_clock::now() - start;
  response.latency_ms =
      std::chrono::duration<double, std::milli>(elapsed).count();

  if (!reply.contains("choices") || !reply["choices"].is_array() ||
      reply["choices"].empty()) {
    fail(Errc::backend_unavailable, "response carries no choices");
  }
  const json& choice = reply["choices"][0];
  if (choice.contains("message") && choice["message"].contains("content") &&
      choice["message"]["content"].is_string()) {
    response.text = choice["message"]["content"].get<std::string>();
  } else if (choice.contains("text") && choice["text"].is_string()) {
    response.text = choice["text"].get<std::string>();
  } else {
    fail(Errc::backend_unavailable, "response carries no text");
  }
  response.truncated = choice.value("finish_reason", "") == "length";
  return response;
}

std::vector<BatchItem> Gateway::complete_batch(
    const std::vector<std::string>& prompts,
    const std::vector<std::string>& replay_keys) {
  if (!replay_keys.empty() && replay_keys.size() != prompts.size()) {
    fail(Errc::length_mismatch, "replay keys vs prompts");
  }
  std::vector<BatchItem> items(prompts.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      try {
        items[i].response = complete(
            prompts[i], replay_keys.empty() ? std::string{} : replay_keys[i]);
        items[i].ok = true;
      } catch (const Error& e) {
        items[i].error_code = e.code();
        items[i].error = e.what();
      } catch (const std::exception& e) {
        items[i].error_code = Errc::io_error;
        items[i].error = e.what();
      }
    }
  };
  size_t thread_count =
      std::min<size_t>(static_cast<size_t>(config_.max_in_flight),
                       prompts.size());
  if (thread_count <= 1) {
    worker();
    return items;
  }
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  return items;
}

std::vector<double> Gateway::embed_uncached_stub(
    const std::string& sentence) const {
  // First 8 digest bytes seed the generator: same sentence, same vector,
  // on any platform.
  std::string digest = util::sha256_hex(sentence);
  uint64_t seed = 0;
  for (int i = 0; i < 16; ++i) {
    char c = digest[static_cast<size_t>(i)];
    uint64_t nibble =
        c <= '9' ? static_cast<uint64_t>(c - '0')
                 : static_cast<uint64_t>(c - 'a') + 10;
    seed = (seed << 4) | nibble;
  }
  std::mt19937_64 rng(seed);
  util::NormalSource normals(rng);
  std::vector<double> vec(static_cast<size_t>(config_.stub_embedding_dim));
  for (double& v : vec) v = normals.next();
  normalize(vec);
  return vec;
}

std::vector<std::vector<double>> Gateway::embed(
    const std::vector<std::string>& sentences) {
  std::vector<std::vector<double>> vectors(sentences.size());
  std::vector<size_t> misses;
  for (size_t i = 0; i < sentences.size(); ++i) {
    json cached;
    if (load_cached(config_.cache_dir, embedding_fingerprint(sentences[i]),
                    cached) &&
        cached.contains("vector")) {
      vectors[i] = cached["vector"].get<std::vector<double>>();
    } else {
      misses.push_back(i);
    }
  }

  if (config_.kind == BackendKind::stub) {
    for (size_t i : misses) {
      vectors[i] = embed_uncached_stub(sentences[i]);
      store_cached(config_.cache_dir, embedding_fingerprint(sentences[i]),
                   json{{"vector", vectors[i]}});
    }
  } else if (!misses.empty()) {
    constexpr size_t kChunk = 64;
    for (size_t start = 0; start < misses.size(); start += kChunk) {
      size_t end = std::min(start + kChunk, misses.size());
      json body;
      body["model"] = config_.model_name;
      json input = json::array();
      for (size_t m = start; m < end; ++m) {
        input.push_back(sentences[misses[m]]);
      }
      body["input"] = std::move(input);
      json reply = post_json(config_, config_.embeddings_path, body);
      if (!reply.contains("data") || !reply["data"].is_array() ||
          reply["data"].size() != end - start) {
        fail(Errc::backend_unavailable, "embedding reply shape unexpected");
      }
      for (size_t m = start; m < end; ++m) {
        const json& row = reply["data"][m - start];
        if (!row.contains("embedding") || !row["embedding"].is_array()) {
          fail(Errc::backend_unavailable, "embedding row missing vector");
        }
        auto vec = row["embedding"].get<std::vector<double>>();
        normalize(vec);
        vectors[misses[m]] = std::move(vec);
        store_cached(config_.cache_dir,
                     embedding_fingerprint(sentences[misses[m]]),
                     json{{"vector", vectors[misses[m]]}});
      }
    }
  }

  size_t width = vectors.empty() ? 0 : vectors[0].size();
  for (const auto& vec : vectors) {
    if (vec.size() != width) {
      fail(Errc::dimension_mismatch,
           std::to_string(vec.size()) + " vs " + std::to_string(width));
    }
  }
  return vectors;
}

}  // namespace green
