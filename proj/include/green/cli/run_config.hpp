#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "green/gateway.hpp"

namespace green::cli {

// Single source of truth for a run: a JSON config document plus ordered
// "dotted.key=value" overrides. Every CLI flag funnels into an override so
// the effective config is always serializable and hashable.
class RunConfig {
 public:
  RunConfig();

  static RunConfig from_file(const std::filesystem::path& path,
                             const std::vector<std::string>& overrides);
  static RunConfig from_json(nlohmann::json base,
                             const std::vector<std::string>& overrides);

  const nlohmann::json& effective() const { return effective_; }

  // Hash of the effective config minus output locations, so reruns into a
  // fresh run directory stay byte-identical.
  std::string config_hash() const;

  uint64_t seed() const;
  double failure_threshold() const;

  std::filesystem::path templates_dir() const;
  std::filesystem::path output_dir() const;
  std::string run_dir() const;  // empty = derive a timestamped name

  std::string path(const std::string& name) const;

  BackendConfig backend() const;
  BackendConfig embedding_backend() const;

  int summary_int(const std::string& key, int fallback) const;
  bool prefer_direct() const;
  int bootstrap_resamples() const;
  std::vector<int> confidence_cutoffs() const;
  std::vector<std::string> heuristics() const;
  double drop_fraction() const;
  bool synthesize_exclusive() const;

 private:
  nlohmann::json effective_;
};

// Parses "a.b.c=value"; the value is JSON when it parses, a bare string
// otherwise. Throws Error(config_error) on a missing '='.
void apply_override(nlohmann::json& config, const std::string& assignment);

}  // namespace green::cli
