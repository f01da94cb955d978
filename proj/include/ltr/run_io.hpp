#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "ltr/core.hpp"

namespace ltr {

/// MS MARCO: `qid \t pid \t rank`. TREC: `qid Q0 pid rank score tag`.
enum class RunFormat { MsMarco, Trec };

[[nodiscard]] RunFormat parse_run_format(std::string_view name);

struct RunWriteOptions {
    RunFormat format = RunFormat::MsMarco;
    std::size_t topk = 1000;
    std::string tag = "ltr";
};

void write_run(std::ostream& out, const RankedRun& run, const RunWriteOptions& options = {});
void write_run(const std::filesystem::path& path, const RankedRun& run, const RunWriteOptions& options = {});

/// Detects the format per line by field count (3 or 6). Ranks within a query
/// must be 1..n. MS MARCO lines carry no score, so they are read back with
/// score 1/rank, which keeps the stored order. An empty file gives an empty run.
[[nodiscard]] RankedRun read_run(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_double(double value);

}  // namespace ltr
