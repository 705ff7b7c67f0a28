// The mock server TU must agree with the gateway TU on httplib's
// compile-time configuration, or the shared inline symbols would differ.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <thread>

#include "green/errors.hpp"
#include "green/gateway.hpp"
#include "green/util/io.hpp"

using namespace green;
using nlohmann::json;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "green-gateway-test" /
             name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

BackendConfig stub_config(const std::filesystem::path& stub_dir,
                          const std::filesystem::path& cache_dir = {}) {
  BackendConfig config;
  config.kind = BackendKind::stub;
  config.stub_dir = stub_dir;
  config.cache_dir = cache_dir;
  return config;
}

// Minimal OpenAI-shaped chat server for wire-protocol tests.
struct MockServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  explicit MockServer(httplib::Server::Handler chat_handler) {
    server.Post("/v1/chat/completions", std::move(chat_handler));
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~MockServer() {
    server.stop();
    thread.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port);
  }
};

std::string chat_body(const std::string& content,
                      const std::string& finish_reason = "stop") {
  json body = {{"choices",
                {{{"message", {{"content", content}}},
                  {"finish_reason", finish_reason}}}}};
  return body.dump();
}

BackendConfig http_config(const std::string& endpoint) {
  BackendConfig config;
  config.kind = BackendKind::openai;
  config.endpoint = endpoint;
  config.retry.base_delay_ms = 1;  // keep retry tests fast
  config.retry.max_delay_ms = 2;
  return config;
}

}  // namespace

TEST_CASE("stub completions replay from keyed files") {
  auto stub_dir = fresh_dir("stub-replay");
  util::write_file(stub_dir / "case-1.txt", "stub answer");
  Gateway gateway(stub_config(stub_dir));

  auto response = gateway.complete("any prompt", "case-1");
  CHECK(response.text == "stub answer");
  CHECK(!response.cached);
  CHECK(!response.truncated);
  CHECK(!response.request_fingerprint.empty());

  try {
    gateway.complete("any prompt", "missing-key");
    FAIL("expected backend_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::backend_unavailable);
  }
}

TEST_CASE("cache short-circuits the backend on the second call") {
  auto stub_dir = fresh_dir("stub-cache");
  auto cache_dir = fresh_dir("cache");
  util::write_file(stub_dir / "k.txt", "cached payload");
  Gateway gateway(stub_config(stub_dir, cache_dir));

  auto first = gateway.complete("prompt text", "k");
  CHECK(!first.cached);
  // the stub file disappears; only the cache can answer now
  std::filesystem::remove(stub_dir / "k.txt");
  auto second = gateway.complete("prompt text", "k");
  CHECK(second.cached);
  CHECK(second.text == "cached payload");
  CHECK(second.request_fingerprint == first.request_fingerprint);
}

TEST_CASE("fingerprints pin endpoint, model, and decoding parameters") {
  auto stub_dir = fresh_dir("stub-fp");
  Gateway a(stub_config(stub_dir));
  auto config_b = stub_config(stub_dir);
  config_b.model_name = "other-model";
  Gateway b(config_b);
  CHECK(a.completion_fingerprint("p") != b.completion_fingerprint("p"));
  CHECK(a.completion_fingerprint("p") == a.completion_fingerprint("p"));
  CHECK(a.completion_fingerprint("p") != a.completion_fingerprint("q"));
  CHECK(a.embedding_fingerprint("s") != a.completion_fingerprint("s"));
}

TEST_CASE("batch preserves order and isolates per-item failures") {
  auto stub_dir = fresh_dir("stub-batch");
  util::write_file(stub_dir / "k0.txt", "zero");
  util::write_file(stub_dir / "k2.txt", "two");
  Gateway gateway(stub_config(stub_dir));

  auto items = gateway.complete_batch({"p0", "p1", "p2"}, {"k0", "k1", "k2"});
  REQUIRE(items.size() == 3);
  CHECK(items[0].ok);
  CHECK(items[0].response.text == "zero");
  CHECK(!items[1].ok);
  CHECK(items[1].error_code == Errc::backend_unavailable);
  CHECK(items[2].ok);
  CHECK(items[2].response.text == "two");
}

TEST_CASE("batch rejects mismatched replay key counts") {
  Gateway gateway(stub_config(fresh_dir("stub-len")));
  CHECK_THROWS_AS(gateway.complete_batch({"p0", "p1"}, {"k0"}), Error);
}

TEST_CASE("stub embeddings are unit norm, fixed width, deterministic") {
  auto config = stub_config(fresh_dir("stub-embed"));
  config.stub_embedding_dim = 16;
  Gateway gateway(config);

  auto vectors = gateway.embed({"first sentence", "second sentence",
                                "first sentence"});
  REQUIRE(vectors.size() == 3);
  for (const auto& vector : vectors) {
    REQUIRE(vector.size() == 16);
    double norm = 0;
    for (double v : vector) norm += v * v;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(vectors[0] == vectors[2]);
  CHECK(vectors[0] != vectors[1]);

  Gateway again(config);
  CHECK(again.embed({"first sentence"})[0] == vectors[0]);
}

TEST_CASE("http completions send temperature zero and parse the reply") {
  std::string seen_body;
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    res.set_content(chat_body("hello from mock"), "application/json");
  });

  Gateway gateway(http_config(mock.endpoint()));
  auto response = gateway.complete("prompt contents");
  CHECK(response.text == "hello from mock");
  CHECK(!response.truncated);

  json request = json::parse(seen_body);
  CHECK(request["temperature"].get<double>() == 0.0);
  CHECK(request["model"] == "green");
  CHECK(request["max_tokens"].get<int>() == 2048);
  REQUIRE(request["messages"].size() == 1);
  CHECK(request["messages"][0]["role"] == "user");
  CHECK(request["messages"][0]["content"] == "prompt contents");
}

TEST_CASE("finish_reason length sets the truncation flag") {
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    res.set_content(chat_body("partial tex", "length"), "application/json");
  });
  Gateway gateway(http_config(mock.endpoint()));
  auto response = gateway.complete("p");
  CHECK(response.truncated);
  CHECK(response.text == "partial tex");
}

TEST_CASE("4xx refusals do not retry; 5xx retries until success") {
  std::atomic<int> refused_hits{0};
  MockServer refuser([&](const httplib::Request&, httplib::Response& res) {
    ++refused_hits;
    res.status = 400;
    res.set_content("bad request", "text/plain");
  });
  Gateway refused(http_config(refuser.endpoint()));
  try {
    refused.complete("p");
    FAIL("expected backend_refused");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::backend_refused);
  }
  CHECK(refused_hits.load() == 1);

  std::atomic<int> flaky_hits{0};
  MockServer flaky([&](const httplib::Request&, httplib::Response& res) {
    if (++flaky_hits <= 2) {
      res.status = 500;
      res.set_content("boom", "text/plain");
    } else {
      res.set_content(chat_body("recovered"), "application/json");
    }
  });
  Gateway gateway(http_config(flaky.endpoint()));
  auto response = gateway.complete("p");
  CHECK(response.text == "recovered");
  CHECK(flaky_hits.load() == 3);
}

TEST_CASE("429 is retryable; exhausted retries are unavailable") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 429;
    res.set_content("slow down", "text/plain");
  });
  Gateway gateway(http_config(mock.endpoint()));
  try {
    gateway.complete("p");
    FAIL("expected backend_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::backend_unavailable);
  }
  CHECK(hits.load() == 3);  // max_attempts
}

TEST_CASE("mangled 200 bodies retry instead of crashing") {
  std::atomic<int> hits{0};
  MockServer mock([&](const httplib::Request&, httplib::Response& res) {
    if (++hits == 1) {
      res.set_content("not json at all", "application/json");
    } else {
      res.set_content(chat_body("clean"), "application/json");
    }
  });
  Gateway gateway(http_config(mock.endpoint()));
  auto response = gateway.complete("p");
  CHECK(response.text == "clean");
  CHECK(hits.load() == 2);
}

TEST_CASE("batch concurrency never exceeds max_in_flight") {
  std::atomic<int> in_flight{0};
  std::atomic<int> peak{0};
  MockServer mock([&](const httplib::Request& req, httplib::Response& res) {
    int now = ++in_flight;
    int snapshot = peak.load();
    while (now > snapshot && !peak.compare_exchange_weak(snapshot, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    json body = json::parse(req.body);
    std::string prompt = body["messages"][0]["content"];
    res.set_content(chat_body("echo:" + prompt), "application/json");
    --in_flight;
  });

  auto config = http_config(mock.endpoint());
  config.max_in_flight = 3;
  Gateway gateway(config);
  std::vector<std::string> prompts;
  for (int i = 0; i < 12; ++i) prompts.push_back("p" + std::to_string(i));
  auto items = gateway.complete_batch(prompts);

  REQUIRE(items.size() == prompts.size());
  for (size_t i = 0; i < items.size(); ++i) {
    REQUIRE(items[i].ok);
    CHECK(items[i].response.text == "echo:" + prompts[i]);
  }
  CHECK(peak.load() <= 3);
  CHECK(peak.load() >= 2);  // parallelism actually happened
}

TEST_CASE("openai embeddings validate the returned shape") {
  MockServer mock([&](const httplib::Request&, httplib::Response&) {});
  mock.server.Post(
      "/v1/embeddings", [&](const httplib::Request& req, httplib::Response& res) {
        json body = json::parse(req.body);
        json data = json::array();
        for (size_t i = 0; i < body["input"].size(); ++i) {
          // the sentence "two" comes back one element short
          json vec = json::array();
          size_t dim = body["input"][i] == "two" ? 3 : 4;
          for (size_t d = 0; d < dim; ++d) {
            vec.push_back(0.5 + static_cast<double>(d));
          }
          data.push_back({{"embedding", vec}, {"index", i}});
        }
        res.set_content(json{{"data", data}}.dump(), "application/json");
      });

  Gateway gateway(http_config(mock.endpoint()));
  try {
    gateway.embed({"one", "two"});
    FAIL("expected dimension_mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
  // uniform widths come back normalized
  auto vectors = gateway.embed({"one", "three"});
  REQUIRE(vectors.size() == 2);
  REQUIRE(vectors[0].size() == 4);
  double norm = 0;
  for (double v : vectors[0]) norm += v * v;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gateway constructor validates its parameters") {
  BackendConfig config;
  config.kind = BackendKind::stub;
  config.max_in_flight = 0;
  CHECK_THROWS_AS(Gateway{config}, Error);
  config.max_in_flight = 4;
  config.retry.max_attempts = 0;
  CHECK_THROWS_AS(Gateway{config}, Error);
  config.retry.max_attempts = 3;
  config.max_new_tokens = 0;
  CHECK_THROWS_AS(Gateway{config}, Error);
}
