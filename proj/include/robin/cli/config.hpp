#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "robin/error.hpp"
#include "robin/geometry.hpp"

namespace robin::cli {

enum class Backend { exact1d, separable, fem };

[[nodiscard]] const char* backend_name(Backend b);

/// Check identifiers in canonical order.
[[nodiscard]] const std::vector<std::string>& known_checks();

class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error("config " + (path.empty() ? std::string("<root>") : path) + ": " + what), path_(path) {}
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct RunConfig {
  DomainSpec domain;
  Backend backend = Backend::exact1d;
  std::optional<double> mesh_h;
  std::vector<double> alpha_grid;  // strictly increasing
  std::vector<int> clusters;
  std::vector<std::string> checks;  // canonical order, no duplicates
  std::filesystem::path output_dir = "robin-limit-out";
  std::uint32_t seed = 42;
  nlohmann::json source;  // normalized input, used for hashing

  [[nodiscard]] bool has_check(const std::string& id) const;
  /// fem only: alpha above 0.1 / mesh_h.
  [[nodiscard]] bool outside_window(double alpha) const;
};

/// Throws ConfigError naming the offending field (e.g. "alpha_grid.count").
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the sorted-key dump of the normalized config.
[[nodiscard]] std::uint64_t config_hash(const RunConfig& config);
[[nodiscard]] std::string config_hash_hex(const RunConfig& config);

}  // namespace robin::cli
