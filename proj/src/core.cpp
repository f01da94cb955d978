#include "ltr/core.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace ltr {

void validate_id(std::string_view id, std::string_view what)
{
    if (id.empty()) {
        throw DataError(std::string(what) + " id is empty");
    }
    if (id.find_first_of("\t\r\n") != std::string_view::npos) {
        throw DataError(std::string(what) + " id contains tab or newline: " + std::string(id));
    }
}

void Judgments::set(const QueryId& query, const DocId& doc, int grade)
{
    validate_id(query, "query");
    validate_id(doc, "doc");
    if (grade < 0) {
        throw DataError("negative relevance grade for (" + query + ", " + doc + ")");
    }
    m_grades[query][doc] = grade;
}

int Judgments::grade(const QueryId& query, const DocId& doc) const
{
    auto q = m_grades.find(query);
    if (q == m_grades.end()) {
        return 0;
    }
    auto d = q->second.find(doc);
    return d == q->second.end() ? 0 : d->second;
}

std::vector<QueryId> Judgments::queries() const
{
    std::vector<QueryId> out;
    out.reserve(m_grades.size());
    for (const auto& [q, _] : m_grades) {
        out.push_back(q);
    }
    return out;
}

std::set<DocId> Judgments::relevant(const QueryId& query) const
{
    std::set<DocId> out;
    auto q = m_grades.find(query);
    if (q == m_grades.end()) {
        return out;
    }
    for (const auto& [doc, grade] : q->second) {
        if (grade > 0) {
            out.insert(doc);
        }
    }
    return out;
}

void QueryGroup::validate() const
{
    validate_id(query_id, "query");
    if (items.empty()) {
        return;
    }
    const auto dim = items.front().features.size();
    if (dim == 0) {
        throw DataError("query " + query_id + ": feature vectors are empty");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& item : items) {
        validate_id(item.doc_id, "doc");
        if (!seen.insert(item.doc_id).second) {
            throw DuplicateIdError(item.doc_id);
        }
        if (item.features.size() != dim) {
            throw DataError("query " + query_id + ": doc " + item.doc_id + " has "
                            + std::to_string(item.features.size()) + " features, expected "
                            + std::to_string(dim));
        }
    }
}

std::size_t QueryGroup::feature_dim() const
{
    return items.empty() ? 0 : items.front().features.size();
}

void sort_ranked(std::vector<ScoredDoc>& docs)
{
    std::unordered_set<std::string_view> seen;
    seen.reserve(docs.size());
    for (const auto& d : docs) {
        if (!seen.insert(d.doc_id).second) {
            throw DuplicateIdError(d.doc_id);
        }
        if (std::isnan(d.score)) {
            throw DataError("NaN score for doc " + d.doc_id);
        }
    }
    std::sort(docs.begin(), docs.end(), ranks_before);
}

void RankedRun::set(const QueryId& query, List docs)
{
    validate_id(query, "query");
    for (const auto& d : docs) {
        validate_id(d.doc_id, "doc");
    }
    sort_ranked(docs);
    m_lists[query] = std::move(docs);
}

const RankedRun::List* RankedRun::find(const QueryId& query) const
{
    auto it = m_lists.find(query);
    return it == m_lists.end() ? nullptr : &it->second;
}

std::map<DocId, std::size_t> rank_positions(std::span<const ScoredDoc> docs)
{
    std::vector<ScoredDoc> sorted(docs.begin(), docs.end());
    sort_ranked(sorted);
    std::map<DocId, std::size_t> ranks;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        ranks.emplace(sorted[i].doc_id, i + 1);
    }
    return ranks;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        auto c = static_cast<unsigned char>(raw);
        bool word = c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')
                    || (c >= 'A' && c <= 'Z');
        if (word) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : raw);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

}  // namespace ltr
