#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltr/core.hpp"
#include "ltr/retrieval.hpp"

namespace ltr {

/// A malformed input line. The message carries the file and 1-based line number.
class ParseError : public DataError {
  public:
    ParseError(const std::string& source, std::size_t line, const std::string& what);

    [[nodiscard]] std::size_t line() const noexcept { return m_line; }

  private:
    std::size_t m_line;
};

/// Reads text lines with CRLF tolerance and line numbering.
class LineReader {
  public:
    explicit LineReader(const std::filesystem::path& path);

    /// Next line without its terminator; nullopt at end of file.
    std::optional<std::string> next();

    [[nodiscard]] std::size_t line_number() const noexcept { return m_line; }
    [[nodiscard]] const std::string& source() const noexcept { return m_source; }

  private:
    std::ifstream m_in;
    std::string m_source;
    std::size_t m_line = 0;
};

/// Splits on every tab; keeps empty fields.
[[nodiscard]] std::vector<std::string_view> split_tabs(std::string_view line);

struct Triple {
    std::string query_text;
    std::string positive_text;
    std::string negative_text;
};

/// Streams `query \t positive \t negative` records in file order.
class TripleReader {
  public:
    explicit TripleReader(const std::filesystem::path& path) : m_lines(path) {}

    std::optional<Triple> next();

  private:
    LineReader m_lines;
};

[[nodiscard]] std::vector<Triple> parse_triples(const std::filesystem::path& path);

/// Query-passage texts of one fixed-size training list before featurization.
struct TextListEntry {
    std::string passage_text;
    double label = 0.0;
    bool real = true;  ///< false for padding
};

struct TextList {
    std::string query_text;
    std::vector<TextListEntry> entries;
};

/// Groups consecutive triples sharing (query, positive), deduplicates and
/// shuffles the negatives, and chunks them into lists of `list_size - 1`
/// negatives plus the positive at a seeded position. The last short chunk is
/// padded. Throws std::invalid_argument if list_size < 2.
[[nodiscard]] std::vector<TextList> group_triples(std::span<const Triple> triples, std::size_t list_size,
                                                  std::uint64_t seed);

/// Lightweight query-passage text statistics used in place of a neural encoder.
///
/// Feature layout, version 1 (kFeatureDim = 8):
///   0  overlap count: distinct query tokens present in the passage
///   1  overlap fraction: feature 0 / distinct query tokens
///   2  IDF-weighted overlap fraction (IDF from the index, 1.0 per token without one)
///   3  ln(1 + query token count)
///   4  ln(1 + passage token count)
///   5  passage token count / query token count
///   6  BM25 of the passage against the index statistics (0 without an index)
///   7  query-token density: occurrences of query tokens / passage token count
class Featurizer {
  public:
    static constexpr std::size_t kFeatureDim = 8;
    static constexpr std::uint32_t kVersion = 1;

    Featurizer() = default;
    /// The index must outlive the featurizer.
    explicit Featurizer(const InvertedIndex* index) : m_index(index) {}

    [[nodiscard]] std::vector<double> operator()(std::string_view query_text,
                                                 std::string_view passage_text) const;
    [[nodiscard]] std::vector<double> features(std::span<const std::string> query_tokens,
                                               std::span<const std::string> passage_tokens) const;

  private:
    const InvertedIndex* m_index = nullptr;
};

/// Feature vector of one training list entry.
struct TrainingItem {
    std::vector<double> features;
    double label = 0.0;
    bool real = true;
};

struct TrainingList {
    std::string query_key;
    std::vector<TrainingItem> items;
};

[[nodiscard]] TrainingList featurize_list(const TextList& list, const Featurizer& featurize);

/// qrels: whitespace-separated `qid 0 pid grade`.
[[nodiscard]] Judgments parse_qrels(const std::filesystem::path& path);

struct Candidate {
    DocId doc_id;
    std::string passage_text;
};

/// Candidates of one query in the order they appeared in the file.
struct CandidateGroup {
    QueryId query_id;
    std::string query_text;
    std::vector<Candidate> candidates;
};

using WarningSink = std::function<void(const std::string&)>;

/// top1000: `qid \t pid \t query \t passage`. Groups are returned in order of
/// first appearance; a repeated (qid, pid) keeps the first occurrence and
/// reports a warning.
[[nodiscard]] std::vector<CandidateGroup> parse_top1000(const std::filesystem::path& path,
                                                        const WarningSink& warn = {});

/// collection: `pid \t passage`.
[[nodiscard]] Corpus parse_collection(const std::filesystem::path& path);

/// queries: `qid \t query`.
[[nodiscard]] std::vector<std::pair<QueryId, std::string>> parse_queries(const std::filesystem::path& path);

/// Featurizes every candidate of each group.
[[nodiscard]] std::vector<QueryGroup> featurize_groups(std::span<const CandidateGroup> groups,
                                                       const Featurizer& featurize);

}  // namespace ltr
