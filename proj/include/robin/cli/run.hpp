#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace robin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs every check of the config, writes report.csv and report.json into the
/// output directory and returns 0 (no fail rows), 1 (fail rows) or 2 (bad config).
int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Anchor and pass criteria of a check; 2 for an unknown id.
int explain_command(const std::string& id, std::ostream& out, std::ostream& err);
[[nodiscard]] std::optional<std::string> explain_text(const std::string& id);

/// Cache root: $ROBIN_LIMIT_CACHE, else <output_dir>/.cache.
[[nodiscard]] std::filesystem::path cache_root(const std::filesystem::path& output_dir);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace robin::cli
