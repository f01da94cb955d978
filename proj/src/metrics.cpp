#include "ltr/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <stdexcept>

#include "json.hpp"

namespace ltr {
namespace {

void check_inputs(const Judgments& judgments, std::size_t k)
{
    if (k == 0) {
        throw std::invalid_argument("cutoff k must be >= 1");
    }
    if (judgments.empty()) {
        throw DataError("no judgments to evaluate against");
    }
}

}  // namespace

EvalReport mrr_at_k(const RankedRun& run, const Judgments& judgments, std::size_t k)
{
    check_inputs(judgments, k);
    EvalReport report;
    report.k = k;
    double total = 0.0;
    for (const auto& query : judgments.queries()) {
        const auto relevant = judgments.relevant(query);
        if (relevant.empty()) {
            ++report.no_relevant_count;
            continue;
        }
        double rr = 0.0;
        if (const auto* list = run.find(query)) {
            const auto depth = std::min(k, list->size());
            for (std::size_t i = 0; i < depth; ++i) {
                if (relevant.contains((*list)[i].doc_id)) {
                    rr = 1.0 / static_cast<double>(i + 1);
                    break;
                }
            }
        }
        report.per_query.push_back({query, rr});
        total += rr;
    }
    report.query_count = report.per_query.size();
    report.mrr = report.query_count > 0 ? total / static_cast<double>(report.query_count) : 0.0;
    return report;
}

RecallReport recall_at_k(const RankedRun& run, const Judgments& judgments, std::size_t k)
{
    check_inputs(judgments, k);
    RecallReport report;
    report.k = k;
    double total = 0.0;
    for (const auto& query : judgments.queries()) {
        const auto relevant = judgments.relevant(query);
        if (relevant.empty()) {
            ++report.excluded;
            continue;
        }
        std::size_t found = 0;
        if (const auto* list = run.find(query)) {
            const auto depth = std::min(k, list->size());
            for (std::size_t i = 0; i < depth; ++i) {
                found += relevant.contains((*list)[i].doc_id) ? 1 : 0;
            }
        }
        total += static_cast<double>(found) / static_cast<double>(relevant.size());
        ++report.query_count;
    }
    report.recall = report.query_count > 0 ? total / static_cast<double>(report.query_count) : 0.0;
    return report;
}

void write_report_text(std::ostream& out, const EvalReport& mrr, const RecallReport* recall)
{
    const auto flags = out.flags();
    out << std::fixed << std::setprecision(4);
    out << "MRR@" << mrr.k << ": " << mrr.mrr << '\n';
    if (recall != nullptr) {
        out << "Recall@" << recall->k << ": " << recall->recall << '\n';
    }
    out << "QueriesEvaluated: " << mrr.query_count << '\n';
    out << "QueriesWithoutRelevant: " << mrr.no_relevant_count << '\n';
    out.flags(flags);
}

void write_report_jsonl(std::ostream& out, const EvalReport& mrr, const RecallReport* recall)
{
    for (const auto& q : mrr.per_query) {
        out << nlohmann::json{{"query_id", q.query_id}, {"rr", q.value}}.dump() << '\n';
    }
    nlohmann::json aggregate{{"aggregate", true},
                             {"k", mrr.k},
                             {"mrr", mrr.mrr},
                             {"queries", mrr.query_count},
                             {"queries_without_relevant", mrr.no_relevant_count}};
    if (recall != nullptr) {
        aggregate["recall_k"] = recall->k;
        aggregate["recall"] = recall->recall;
    }
    out << aggregate.dump() << '\n';
}

}  // namespace ltr
