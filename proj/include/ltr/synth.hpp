#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ltr/core.hpp"
#include "ltr/data.hpp"

namespace ltr {

struct SynthConfig {
    std::size_t queries = 200;        ///< dev queries
    std::size_t train_queries = 200;
    std::size_t docs_per_query = 100;
    std::size_t vocabulary = 5000;
    std::uint64_t seed = 0;
};

/// Desk-scale benchmark. Every query owns docs_per_query passages, exactly one
/// of them relevant. Relevance is planted through query-term coverage: the
/// relevant passage usually contains most query terms once or twice, hard
/// negatives repeat a subset of them, easy negatives are background text.
struct SynthDataset {
    std::vector<std::pair<DocId, std::string>> collection;
    std::vector<std::pair<QueryId, std::string>> dev_queries;
    std::vector<std::pair<QueryId, std::string>> train_queries;
    std::vector<Triple> triples;
    Judgments dev_qrels;
    Judgments train_qrels;
    std::vector<CandidateGroup> dev_candidates;  ///< each dev query with its own passages

    [[nodiscard]] Corpus corpus() const;
};

/// Throws std::invalid_argument for zero sizes or fewer than 2 docs per query.
[[nodiscard]] SynthDataset generate_synthetic(const SynthConfig& config);

/// Writes collection.tsv, queries.dev.tsv, queries.train.tsv, triples.train.tsv,
/// qrels.dev.tsv, qrels.train.tsv and top1000.dev.tsv into `dir`.
void write_synthetic(const SynthDataset& data, const std::filesystem::path& dir);

}  // namespace ltr
