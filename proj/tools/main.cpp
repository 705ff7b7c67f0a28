// greeneval: evaluate, summarize, validate, synthesize, and prefer
// radiology report pairs against a reference-report corpus.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "green/cli/commands.hpp"
#include "green/cli/run_config.hpp"
#include "green/errors.hpp"

namespace {

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_file,
                  "JSON config file (defaults apply when omitted)");
  cmd->add_option("--set", args.overrides,
                  "dotted override, e.g. --set backend.kind=stub")
      ->take_all();
}

// Convenience flags expand to --set overrides so one merge path serves both.
void add_path_flag(CLI::App* cmd, CommonArgs& args, const std::string& flag,
                   const std::string& key) {
  auto setter = [&args, key](const std::string& value) {
    args.overrides.push_back(key + "=" + value);
  };
  cmd->add_option_function<std::string>(flag, setter);
}

green::cli::RunConfig build_config(const CommonArgs& args) {
  if (args.config_file.empty()) {
    return green::cli::RunConfig::from_json(nlohmann::json::object(),
                                            args.overrides);
  }
  return green::cli::RunConfig::from_file(args.config_file, args.overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GREEN radiology report evaluation"};
  app.require_subcommand(1);

  struct SubcommandSpec {
    const char* name;
    const char* help;
    int (*run)(const green::cli::RunConfig&);
  };
  const SubcommandSpec specs[] = {
      {"evaluate", "score candidate reports against references",
       green::cli::cmd_evaluate},
      {"summarize", "cluster error explanations from a results file",
       green::cli::cmd_summarize},
      {"validate", "compare scores against expert annotations",
       green::cli::cmd_validate},
      {"synthesize", "build candidate/reference pairs from raw reports",
       green::cli::cmd_synthesize},
      {"prefer", "rank candidate pairs per case", green::cli::cmd_prefer},
  };

  std::vector<CommonArgs> all_args(std::size(specs));
  std::function<int()> selected;
  for (size_t i = 0; i < std::size(specs); ++i) {
    const auto& spec = specs[i];
    auto& args = all_args[i];
    CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
    add_common(cmd, args);
    add_path_flag(cmd, args, "--pairs", "paths.pairs");
    add_path_flag(cmd, args, "--results", "paths.results");
    add_path_flag(cmd, args, "--annotations", "paths.annotations");
    add_path_flag(cmd, args, "--preferences", "paths.preferences");
    add_path_flag(cmd, args, "--prefer-results", "paths.prefer_results");
    add_path_flag(cmd, args, "--cases", "paths.cases");
    add_path_flag(cmd, args, "--reports", "paths.reports");
    add_path_flag(cmd, args, "--similarity", "paths.similarity");
    add_path_flag(cmd, args, "--templates-dir", "paths.templates_dir");
    add_path_flag(cmd, args, "--run-dir", "run_dir");
    add_path_flag(cmd, args, "--output-dir", "output_dir");
    add_path_flag(cmd, args, "--seed", "seed");
    cmd->callback([&spec, &args, &selected]() {
      selected = [&spec, &args]() { return spec.run(build_config(args)); };
    });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return selected();
  } catch (const green::Error& e) {
    std::string name(green::errc_name(e.code()));
    std::fprintf(stderr, "error [%s]: %s\n", name.c_str(), e.what());
    return green::cli::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return green::cli::kExitConfigError;
  }
}
