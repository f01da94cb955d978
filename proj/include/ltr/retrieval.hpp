#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltr/core.hpp"

namespace ltr {

struct Passage {
    DocId id;
    std::string text;
    std::vector<std::string> tokens;
};

/// Tokenized passage collection. Doc ids are unique.
class Corpus {
  public:
    /// Tokenizes `text`; throws DuplicateIdError on a repeated id.
    void add(DocId id, std::string text);

    [[nodiscard]] const std::vector<Passage>& passages() const noexcept { return m_passages; }
    [[nodiscard]] const Passage* find(const DocId& id) const;
    [[nodiscard]] std::size_t size() const noexcept { return m_passages.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_passages.empty(); }

  private:
    std::vector<Passage> m_passages;
    std::unordered_map<DocId, std::size_t> m_by_id;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t doc = 0;  ///< index into InvertedIndex::doc_ids()
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

/// Postings per token. Internal doc numbers follow ascending DocId, so every
/// postings list is sorted by DocId.
class InvertedIndex {
  public:
    [[nodiscard]] std::size_t num_docs() const noexcept { return m_doc_ids.size(); }
    [[nodiscard]] double avgdl() const noexcept { return m_avgdl; }
    [[nodiscard]] std::size_t df(const std::string& token) const;
    [[nodiscard]] const std::vector<Posting>* postings(const std::string& token) const;
    [[nodiscard]] const std::vector<DocId>& doc_ids() const noexcept { return m_doc_ids; }
    [[nodiscard]] const std::vector<std::uint32_t>& doc_lengths() const noexcept
    {
        return m_doc_lengths;
    }
    [[nodiscard]] std::size_t vocabulary_size() const noexcept { return m_postings.size(); }

    /// +1-smoothed IDF, ln((N - df + 0.5) / (df + 0.5) + 1).
    [[nodiscard]] double idf(const std::string& token) const;

    bool operator==(const InvertedIndex&) const = default;

    friend InvertedIndex build_index(const Corpus& corpus);
    friend InvertedIndex load_index(const std::filesystem::path& path);
    friend void save_index(const InvertedIndex& index, const std::filesystem::path& path);

  private:
    std::vector<DocId> m_doc_ids;
    std::vector<std::uint32_t> m_doc_lengths;
    double m_avgdl = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> m_postings;
};

/// Throws DataError on an empty corpus.
[[nodiscard]] InvertedIndex build_index(const Corpus& corpus);

/// Top-k documents by Okapi BM25 over the distinct query tokens, ranked
/// (score desc, doc id asc). Only documents matching at least one token are returned.
[[nodiscard]] std::vector<ScoredDoc> bm25_search(const InvertedIndex& index,
                                                 std::span<const std::string> query_tokens,
                                                 std::size_t k, Bm25Params params = {});

/// BM25 of an arbitrary token sequence using the index's collection statistics.
[[nodiscard]] double bm25_score(const InvertedIndex& index, std::span<const std::string> query_tokens,
                                std::span<const std::string> passage_tokens, Bm25Params params = {});

/// Snapshot layout (little-endian): magic "LTRIDX\0\0", u32 version (1), u64 N,
/// N x {u32 id length, id bytes, u32 doc length}, u64 vocabulary size, then per
/// token in ascending byte order {u32 token length, token bytes, u64 postings
/// count, count x {u32 doc, u32 tf}}.
void save_index(const InvertedIndex& index, const std::filesystem::path& path);
[[nodiscard]] InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace ltr
