#include "green/cli/run_config.hpp"

#include "green/util/io.hpp"
#include "green/util/sha256.hpp"
#include "green/util/text.hpp"

namespace green::cli {

namespace {

using nlohmann::json;

json default_backend() {
  return json{{"kind", "openai"},
              {"endpoint", "http://127.0.0.1:8080"},
              {"chat_path", "/v1/chat/completions"},
              {"embeddings_path", "/v1/embeddings"},
              {"model_name", "green"},
              {"max_new_tokens", 2048},
              {"max_in_flight", 4},
              {"retry_max_attempts", 3},
              {"retry_base_delay_ms", 250},
              {"retry_max_delay_ms", 4000},
              {"retry_jitter", true},
              {"auth_env", ""},
              {"cache_dir", ""},
              {"stub_dir", ""},
              {"stub_embedding_dim", 64}};
}

json default_config() {
  return json{
      {"seed", 20240521},
      {"output_dir", "runs"},
      {"run_dir", ""},
      {"failure_threshold", 0.0},
      {"backend", default_backend()},
      {"embedding_backend", default_backend()},
      {"paths",
       {{"templates_dir", "assets/templates"},
        {"pairs", ""},
        {"annotations", ""},
        {"preferences", ""},
        {"results", ""},
        {"prefer_results", ""},
        {"cases", ""},
        {"reports", ""},
        {"similarity", ""}}},
      {"summary", {{"representatives", 3}, {"max_k", 10}, {"restarts", 10}}},
      {"synthesize",
       {{"heuristics", json::array({"shuffle", "drop", "random_pair"})},
        {"drop_fraction", 0.3},
        {"exclusive", true}}},
      {"prefer", {{"direct", true}}},
      {"validate",
       {{"bootstrap_resamples", 1000},
        {"confidence_cutoffs",
         json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10})}}}};
}

// Deep merge: user values win over defaults, object-by-object.
void merge_into(json& base, const json& user) {
  if (!user.is_object() || !base.is_object()) {
    base = user;
    return;
  }
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (base.contains(it.key()) && base[it.key()].is_object() &&
        it.value().is_object()) {
      merge_into(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

const json* find_node(const json& root, const std::string& dotted) {
  const json* node = &root;
  for (const auto& part : util::split(dotted, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

BackendConfig backend_from(const json& node) {
  BackendConfig config;
  std::string kind = node.value("kind", "openai");
  if (kind == "stub") {
    config.kind = BackendKind::stub;
  } else if (kind == "openai") {
    config.kind = BackendKind::openai;
  } else {
    fail(Errc::config_error, "unknown backend kind '" + kind + "'");
  }
  config.endpoint = node.value("endpoint", config.endpoint);
  config.chat_path = node.value("chat_path", config.chat_path);
  config.embeddings_path =
      node.value("embeddings_path", config.embeddings_path);
  config.model_name = node.value("model_name", config.model_name);
  config.max_new_tokens = node.value("max_new_tokens", config.max_new_tokens);
  config.max_in_flight = node.value("max_in_flight", config.max_in_flight);
  config.retry.max_attempts =
      node.value("retry_max_attempts", config.retry.max_attempts);
  config.retry.base_delay_ms =
      node.value("retry_base_delay_ms", config.retry.base_delay_ms);
  config.retry.max_delay_ms =
      node.value("retry_max_delay_ms", config.retry.max_delay_ms);
  config.retry.jitter = node.value("retry_jitter", config.retry.jitter);
  config.auth_env = node.value("auth_env", config.auth_env);
  config.cache_dir = node.value("cache_dir", std::string{});
  config.stub_dir = node.value("stub_dir", std::string{});
  config.stub_embedding_dim =
      node.value("stub_embedding_dim", config.stub_embedding_dim);
  return config;
}

}  // namespace

RunConfig::RunConfig() : effective_(default_config()) {}

RunConfig RunConfig::from_file(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides) {
  json user = json::parse(util::read_file(path), nullptr, false);
  if (user.is_discarded() || !user.is_object()) {
    fail(Errc::config_error, path.string() + " is not a JSON object");
  }
  return from_json(std::move(user), overrides);
}

RunConfig RunConfig::from_json(json base,
                               const std::vector<std::string>& overrides) {
  RunConfig config;
  merge_into(config.effective_, base);
  for (const auto& assignment : overrides) {
    apply_override(config.effective_, assignment);
  }
  return config;
}

void apply_override(json& config, const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    fail(Errc::config_error,
         "override '" + assignment + "' is not key=value");
  }
  std::string dotted = assignment.substr(0, eq);
  std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // bare string
  json* node = &config;
  auto parts = util::split(dotted, '.');
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->contains(parts[i]) || !(*node)[parts[i]].is_object()) {
      (*node)[parts[i]] = json::object();
    }
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = std::move(value);
}

std::string RunConfig::config_hash() const {
  json stripped = effective_;
  stripped.erase("run_dir");
  stripped.erase("output_dir");
  return util::sha256_hex(stripped.dump());
}

uint64_t RunConfig::seed() const {
  return effective_.value("seed", uint64_t{0});
}

double RunConfig::failure_threshold() const {
  return effective_.value("failure_threshold", 0.0);
}

std::filesystem::path RunConfig::templates_dir() const {
  return path("templates_dir");
}

std::filesystem::path RunConfig::output_dir() const {
  return effective_.value("output_dir", std::string{"runs"});
}

std::string RunConfig::run_dir() const {
  return effective_.value("run_dir", std::string{});
}

std::string RunConfig::path(const std::string& name) const {
  if (const json* node = find_node(effective_, "paths." + name)) {
    if (node->is_string()) return node->get<std::string>();
  }
  return {};
}

BackendConfig RunConfig::backend() const {
  return backend_from(effective_.value("backend", nlohmann::json::object()));
}

BackendConfig RunConfig::embedding_backend() const {
  return backend_from(
      effective_.value("embedding_backend", nlohmann::json::object()));
}

int RunConfig::summary_int(const std::string& key, int fallback) const {
  if (const json* node = find_node(effective_, "summary." + key)) {
    if (node->is_number_integer()) return node->get<int>();
  }
  return fallback;
}

bool RunConfig::prefer_direct() const {
  if (const json* node = find_node(effective_, "prefer.direct")) {
    if (node->is_boolean()) return node->get<bool>();
  }
  return true;
}

int RunConfig::bootstrap_resamples() const {
  if (const json* node = find_node(effective_, "validate.bootstrap_resamples")) {
    if (node->is_number_integer()) return node->get<int>();
  }
  return 1000;
}

std::vector<int> RunConfig::confidence_cutoffs() const {
  if (const json* node = find_node(effective_, "validate.confidence_cutoffs")) {
    if (node->is_array()) return node->get<std::vector<int>>();
  }
  return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
}

std::vector<std::string> RunConfig::heuristics() const {
  if (const json* node = find_node(effective_, "synthesize.heuristics")) {
    if (node->is_array()) return node->get<std::vector<std::string>>();
  }
  return {"shuffle", "drop", "random_pair"};
}

double RunConfig::drop_fraction() const {
  if (const json* node = find_node(effective_, "synthesize.drop_fraction")) {
    if (node->is_number()) return node->get<double>();
  }
  return 0.3;
}

bool RunConfig::synthesize_exclusive() const {
  if (const json* node = find_node(effective_, "synthesize.exclusive")) {
    if (node->is_boolean()) return node->get<bool>();
  }
  return true;
}

}  // namespace green::cli
