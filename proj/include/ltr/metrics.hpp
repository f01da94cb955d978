#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "ltr/core.hpp"

namespace ltr {

struct QueryScore {
    QueryId query_id;
    double value = 0.0;
};

/// MRR@k over judged queries. A query is evaluated when it has at least one
/// document with grade > 0; judged queries without one are only counted.
struct EvalReport {
    std::size_t k = 10;
    std::vector<QueryScore> per_query;  ///< reciprocal rank per evaluated query, ascending query id
    double mrr = 0.0;
    std::size_t query_count = 0;        ///< evaluated queries
    std::size_t no_relevant_count = 0;  ///< judged queries without a relevant document
};

/// Throws std::invalid_argument for k == 0 and DataError for empty judgments.
[[nodiscard]] EvalReport mrr_at_k(const RankedRun& run, const Judgments& judgments, std::size_t k);

struct RecallReport {
    std::size_t k = 1000;
    double recall = 0.0;
    std::size_t query_count = 0;
    std::size_t excluded = 0;  ///< judged queries with no relevant document
};

/// Mean over judged queries of |relevant in top k| / |relevant|.
[[nodiscard]] RecallReport recall_at_k(const RankedRun& run, const Judgments& judgments, std::size_t k);

void write_report_text(std::ostream& out, const EvalReport& mrr, const RecallReport* recall = nullptr);

/// One JSON object per evaluated query, then one aggregate object.
void write_report_jsonl(std::ostream& out, const EvalReport& mrr, const RecallReport* recall = nullptr);

}  // namespace ltr
