#include "manifest.hpp"

#include "io.hpp"

#include "symcount/version.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

namespace symcount::cli {

RunManifest::RunManifest(std::string command, std::vector<std::string> command_line, nlohmann::json config)
    : command_(std::move(command)),
      command_line_(std::move(command_line)),
      config_(std::move(config)),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::set_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

void RunManifest::write(const std::string& path, const std::string& content) {
  write_file_atomic(path, content);
  outputs_.emplace_back(path, sha256_hex(content));
  if (!manifest_path_) manifest_path_ = path + ".manifest.json";
}

std::string RunManifest::config_digest() const { return sha256_hex(config_.dump()); }

nlohmann::json RunManifest::to_json(bool partial, const std::string& error) const {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [path, digest] : outputs_) outputs.push_back({{"path", path}, {"sha256", digest}});
  nlohmann::json j = {
      {"command", command_},
      {"command_line", command_line_},
      {"config", config_},
      {"config_digest", config_digest()},
      {"seeds", seeds_},
      {"versions",
       {{"symcount", SYMCOUNT_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                      std::to_string(BOOST_VERSION % 100)}}},
      {"wall_clock_seconds", num(elapsed)},
      {"outputs", outputs},
      {"partial", partial},
  };
  if (!extra_.empty()) j["details"] = extra_;
  if (!error.empty()) j["error"] = error;
  return j;
}

void RunManifest::write_manifest(bool partial, const std::string& error) {
  if (!manifest_path_) return;
  write_file_atomic(*manifest_path_, dump_json(to_json(partial, error)));
}

int RunManifest::guard(const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    try {
      write_manifest(true, e.what());
    } catch (...) {
    }
    throw;
  }
  write_manifest(false, {});
  return 0;
}

}  // namespace symcount::cli
