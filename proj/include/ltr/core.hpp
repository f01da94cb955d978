#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ltr {

using QueryId = std::string;
using DocId = std::string;

/// Raised for malformed or inconsistent input data. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when the same document id appears twice where ids must be unique.
class DuplicateIdError : public DataError {
  public:
    explicit DuplicateIdError(std::string id)
        : DataError("duplicate doc id: " + id), m_id(std::move(id))
    {}

    [[nodiscard]] const std::string& id() const noexcept { return m_id; }

  private:
    std::string m_id;
};

/// Throws DataError unless `id` is non-empty and free of tab/newline characters.
void validate_id(std::string_view id, std::string_view what);

/// Relevance judgments. Pairs that were never set have grade 0.
class Judgments {
  public:
    void set(const QueryId& query, const DocId& doc, int grade);

    [[nodiscard]] int grade(const QueryId& query, const DocId& doc) const;
    [[nodiscard]] bool empty() const noexcept { return m_grades.empty(); }

    /// Every query that has at least one judgment line, in ascending order.
    [[nodiscard]] std::vector<QueryId> queries() const;

    /// Documents with grade > 0 for `query`.
    [[nodiscard]] std::set<DocId> relevant(const QueryId& query) const;

  private:
    std::map<QueryId, std::map<DocId, int>> m_grades;
};

struct QueryItem {
    DocId doc_id;
    std::vector<double> features;
    double label = 0.0;
};

/// One query with its candidate documents; the unit scored and ranked together.
struct QueryGroup {
    QueryId query_id;
    std::vector<QueryItem> items;

    /// Checks unique doc ids and a common feature dimension >= 1.
    void validate() const;
    [[nodiscard]] std::size_t feature_dim() const;
};

struct ScoredDoc {
    DocId doc_id;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// Score descending, then doc id ascending.
[[nodiscard]] inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b)
{
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.doc_id < b.doc_id;
}

/// Sorts in place by `ranks_before` and rejects duplicate ids.
void sort_ranked(std::vector<ScoredDoc>& docs);

/// Per-query ranked lists. Stored lists always satisfy the ranking order.
class RankedRun {
  public:
    using List = std::vector<ScoredDoc>;

    /// Replaces the list for `query`; sorts it and validates ids.
    void set(const QueryId& query, List docs);

    [[nodiscard]] const List* find(const QueryId& query) const;
    [[nodiscard]] const std::map<QueryId, List>& lists() const noexcept { return m_lists; }
    [[nodiscard]] std::size_t size() const noexcept { return m_lists.size(); }
    [[nodiscard]] bool empty() const noexcept { return m_lists.empty(); }

    bool operator==(const RankedRun&) const = default;

  private:
    std::map<QueryId, List> m_lists;
};

/// 1-based rank of each document under the (score desc, doc id asc) order.
[[nodiscard]] std::map<DocId, std::size_t> rank_positions(std::span<const ScoredDoc> docs);

/// Lowercase, split on every non-alphanumeric ASCII byte, drop empty tokens.
/// Bytes >= 0x80 are kept as word characters so UTF-8 words stay whole.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view text);

}  // namespace ltr
