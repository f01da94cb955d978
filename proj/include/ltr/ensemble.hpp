#pragma once

#include <span>
#include <string>
#include <vector>

#include "ltr/core.hpp"

namespace ltr {

struct NamedRun {
    std::string name;
    RankedRun run;
};

/// Runs to ensemble. Non-empty, names unique.
class RunSet {
  public:
    RunSet() = default;
    explicit RunSet(std::vector<NamedRun> runs);

    void add(std::string name, RankedRun run);

    [[nodiscard]] const std::vector<NamedRun>& runs() const noexcept { return m_runs; }
    [[nodiscard]] std::size_t size() const noexcept { return m_runs.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_runs.empty(); }

  private:
    std::vector<NamedRun> m_runs;
};

/// Average reciprocal rank over the n runs: s(q, d) = (1/n) * sum_k 1/rank_k(q, d).
/// A run that does not rank d for q contributes 0 while still counting in n.
/// Throws std::invalid_argument on an empty set.
[[nodiscard]] RankedRun ensemble_reciprocal_rank(const RunSet& runs);

/// Two-list fusion on reciprocal ranks: a document ranked in both lists gets
/// the mean of its two reciprocal ranks, one ranked in a single list keeps
/// that list's reciprocal rank. Throws std::invalid_argument if both runs are empty.
[[nodiscard]] RankedRun fuse_two_lists(const RankedRun& run_a, const RankedRun& run_b);

/// Replaces every score by 1/rank.
[[nodiscard]] RankedRun reciprocal_rank_scores(const RankedRun& run);

}  // namespace ltr
