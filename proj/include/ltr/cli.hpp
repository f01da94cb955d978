#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ltr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Runs one subcommand (synth, train, retrieve, rerank, ensemble, fuse, eval).
/// `args` excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads `key=value` lines ('#' comments, blank lines ignored) and appends
/// `--key value` for every key not already present in `args`.
[[nodiscard]] std::vector<std::string> merge_config(std::vector<std::string> args, const std::string& config_path);

}  // namespace ltr::cli
