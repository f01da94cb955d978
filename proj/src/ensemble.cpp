#include "ltr/ensemble.hpp"

#include <algorithm>
#include <map>
#include <vector>
#include <set>
#include <stdexcept>

namespace ltr {

RunSet::RunSet(std::vector<NamedRun> runs)
{
    for (auto& r : runs) {
        add(std::move(r.name), std::move(r.run));
    }
}

void RunSet::add(std::string name, RankedRun run)
{
    for (const auto& r : m_runs) {
        if (r.name == name) {
            throw std::invalid_argument("duplicate run name: " + name);
        }
    }
    m_runs.push_back({std::move(name), std::move(run)});
}

RankedRun ensemble_reciprocal_rank(const RunSet& runs)
{
    if (runs.empty()) {
        throw std::invalid_argument("cannot ensemble an empty run set");
    }
    // Lists are stored in rank order, so position + 1 is the rank.
    std::map<QueryId, std::map<DocId, std::vector<double>>> terms;
    for (const auto& named : runs.runs()) {
        for (const auto& [query, list] : named.run.lists()) {
            auto& docs = terms[query];
            for (std::size_t i = 0; i < list.size(); ++i) {
                docs[list[i].doc_id].push_back(1.0 / static_cast<double>(i + 1));
            }
        }
    }

    const double n = static_cast<double>(runs.size());
    RankedRun out;
    for (auto& [query, docs] : terms) {
        RankedRun::List list;
        list.reserve(docs.size());
        for (auto& [doc, rr] : docs) {
            // summing in a fixed order keeps the result independent of run order
            std::sort(rr.begin(), rr.end());
            double sum = 0.0;
            for (double v : rr) {
                sum += v;
            }
            list.push_back({doc, sum / n});
        }
        out.set(query, std::move(list));
    }
    return out;
}

RankedRun fuse_two_lists(const RankedRun& run_a, const RankedRun& run_b)
{
    if (run_a.empty() && run_b.empty()) {
        throw std::invalid_argument("cannot fuse two empty runs");
    }
    std::set<QueryId> queries;
    for (const auto& [q, _] : run_a.lists()) {
        queries.insert(q);
    }
    for (const auto& [q, _] : run_b.lists()) {
        queries.insert(q);
    }

    RankedRun out;
    for (const auto& query : queries) {
        std::map<DocId, double> rr_a;
        std::map<DocId, double> rr_b;
        if (const auto* list = run_a.find(query)) {
            for (std::size_t i = 0; i < list->size(); ++i) {
                rr_a.emplace((*list)[i].doc_id, 1.0 / static_cast<double>(i + 1));
            }
        }
        if (const auto* list = run_b.find(query)) {
            for (std::size_t i = 0; i < list->size(); ++i) {
                rr_b.emplace((*list)[i].doc_id, 1.0 / static_cast<double>(i + 1));
            }
        }

        RankedRun::List fused;
        fused.reserve(rr_a.size() + rr_b.size());
        for (const auto& [doc, a] : rr_a) {
            auto b = rr_b.find(doc);
            fused.push_back({doc, b == rr_b.end() ? a : (a + b->second) / 2.0});
        }
        for (const auto& [doc, b] : rr_b) {
            if (!rr_a.contains(doc)) {
                fused.push_back({doc, b});
            }
        }
        out.set(query, std::move(fused));
    }
    return out;
}

RankedRun reciprocal_rank_scores(const RankedRun& run)
{
    RankedRun out;
    for (const auto& [query, list] : run.lists()) {
        RankedRun::List rescored;
        rescored.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            rescored.push_back({list[i].doc_id, 1.0 / static_cast<double>(i + 1)});
        }
        out.set(query, std::move(rescored));
    }
    return out;
}

}  // namespace ltr
