#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace symcount::cli {

// Collects artifacts of one run and writes <primary>.manifest.json.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> command_line, nlohmann::json config);

  void set_seed(const std::string& name, std::uint64_t seed);
  void set_manifest_path(std::string path) { manifest_path_ = std::move(path); }
  void note(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

  // Atomically writes an artifact and records its digest. The first artifact names the manifest.
  void write(const std::string& path, const std::string& content);

  const nlohmann::json& config() const { return config_; }
  std::string config_digest() const;
  nlohmann::json to_json(bool partial, const std::string& error = {}) const;

  // Runs body; on failure writes the manifest flagged partial and rethrows.
  int guard(const std::function<void()>& body);

 private:
  void write_manifest(bool partial, const std::string& error);

  std::string command_;
  std::vector<std::string> command_line_;
  nlohmann::json config_;
  nlohmann::json seeds_ = nlohmann::json::object();
  nlohmann::json extra_ = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> outputs_;  // path, sha256
  std::optional<std::string> manifest_path_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace symcount::cli
