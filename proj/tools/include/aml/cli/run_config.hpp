#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aml/train/trainer.hpp"

namespace aml::cli {

// Everything a run needs: training setup, where the data lives and where the
// results go. Serialized as flat key=value text.
struct RunConfig {
  train::TrainConfig train;
  std::string data;
  std::string out = "runs";
  std::string name = "run";

  // Throws ConfigError on an unknown key or a malformed value.
  void set(std::string_view key, std::string_view value);
  // Canonical key=value text; parse_config_text(to_text()) reproduces it.
  std::string to_text() const;
};

RunConfig parse_config_text(std::string_view text);
RunConfig load_config_file(const std::filesystem::path& path);
void apply_overrides(RunConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& overrides);

// Known keys, in canonical order.
const std::vector<std::string>& config_keys();

// base, base-1, base-2, ... : the first that does not exist yet, created.
std::filesystem::path unique_run_dir(const std::filesystem::path& out, const std::string& name);

}  // namespace aml::cli
