#include "ltr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "ltr/binary_io.hpp"

namespace ltr {
namespace {

constexpr char kIndexMagic[8] = {'L', 'T', 'R', 'I', 'D', 'X', '\0', '\0'};
constexpr std::uint32_t kIndexVersion = 1;

double term_weight(double tf, double doc_len, double avgdl, Bm25Params p)
{
    return tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * doc_len / avgdl));
}

std::vector<std::string> distinct(std::span<const std::string> tokens)
{
    std::set<std::string> unique(tokens.begin(), tokens.end());
    return {unique.begin(), unique.end()};
}

}  // namespace

void Corpus::add(DocId id, std::string text)
{
    validate_id(id, "doc");
    if (m_by_id.contains(id)) {
        throw DuplicateIdError(id);
    }
    m_by_id.emplace(id, m_passages.size());
    auto tokens = tokenize(text);
    m_passages.push_back({std::move(id), std::move(text), std::move(tokens)});
}

const Passage* Corpus::find(const DocId& id) const
{
    auto it = m_by_id.find(id);
    return it == m_by_id.end() ? nullptr : &m_passages[it->second];
}

std::size_t InvertedIndex::df(const std::string& token) const
{
    auto it = m_postings.find(token);
    return it == m_postings.end() ? 0 : it->second.size();
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& token) const
{
    auto it = m_postings.find(token);
    return it == m_postings.end() ? nullptr : &it->second;
}

double InvertedIndex::idf(const std::string& token) const
{
    const auto n = static_cast<double>(num_docs());
    const auto d = static_cast<double>(df(token));
    return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

InvertedIndex build_index(const Corpus& corpus)
{
    if (corpus.empty()) {
        throw DataError("cannot index an empty corpus");
    }
    std::vector<const Passage*> order;
    order.reserve(corpus.size());
    for (const auto& p : corpus.passages()) {
        order.push_back(&p);
    }
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });

    InvertedIndex index;
    std::uint64_t total_len = 0;
    for (std::uint32_t doc = 0; doc < order.size(); ++doc) {
        const auto& tokens = order[doc]->tokens;
        index.m_doc_ids.push_back(order[doc]->id);
        index.m_doc_lengths.push_back(static_cast<std::uint32_t>(tokens.size()));
        total_len += tokens.size();

        std::map<std::string_view, std::uint32_t> tf;
        for (const auto& t : tokens) {
            ++tf[t];
        }
        for (const auto& [token, count] : tf) {
            index.m_postings[std::string(token)].push_back({doc, count});
        }
    }
    index.m_avgdl = static_cast<double>(total_len) / static_cast<double>(order.size());
    // an all-empty corpus would make every length normalisation divide by zero
    if (index.m_avgdl <= 0) {
        index.m_avgdl = 1.0;
    }
    return index;
}

std::vector<ScoredDoc> bm25_search(const InvertedIndex& index, std::span<const std::string> query_tokens,
                                   std::size_t k, Bm25Params params)
{
    if (k == 0) {
        throw std::invalid_argument("bm25_search: k must be >= 1");
    }
    std::unordered_map<std::uint32_t, double> accumulators;
    for (const auto& token : distinct(query_tokens)) {
        const auto* list = index.postings(token);
        if (list == nullptr) {
            continue;
        }
        const double idf = index.idf(token);
        for (const auto& p : *list) {
            accumulators[p.doc] += idf * term_weight(p.tf, index.doc_lengths()[p.doc], index.avgdl(), params);
        }
    }

    std::vector<ScoredDoc> results;
    results.reserve(accumulators.size());
    for (const auto& [doc, score] : accumulators) {
        results.push_back({index.doc_ids()[doc], score});
    }
    const auto keep = std::min(k, results.size());
    std::partial_sort(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(keep), results.end(),
                      ranks_before);
    results.resize(keep);
    return results;
}

double bm25_score(const InvertedIndex& index, std::span<const std::string> query_tokens,
                  std::span<const std::string> passage_tokens, Bm25Params params)
{
    std::unordered_map<std::string_view, std::uint32_t> tf;
    for (const auto& t : passage_tokens) {
        ++tf[t];
    }
    const auto len = static_cast<double>(passage_tokens.size());
    double score = 0.0;
    for (const auto& token : distinct(query_tokens)) {
        auto it = tf.find(token);
        if (it == tf.end()) {
            continue;
        }
        score += index.idf(token) * term_weight(it->second, len, index.avgdl(), params);
    }
    return score;
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write index snapshot " + path.string());
    }
    out.write(kIndexMagic, sizeof kIndexMagic);
    binary::write_le<std::uint32_t>(out, kIndexVersion);
    binary::write_le<std::uint64_t>(out, index.num_docs());
    for (std::size_t d = 0; d < index.num_docs(); ++d) {
        binary::write_string(out, index.m_doc_ids[d]);
        binary::write_le<std::uint32_t>(out, index.m_doc_lengths[d]);
    }
    std::map<std::string_view, const std::vector<Posting>*> sorted;
    for (const auto& [token, list] : index.m_postings) {
        sorted.emplace(token, &list);
    }
    binary::write_le<std::uint64_t>(out, sorted.size());
    for (const auto& [token, list] : sorted) {
        binary::write_string(out, std::string(token));
        binary::write_le<std::uint64_t>(out, list->size());
        for (const auto& p : *list) {
            binary::write_le<std::uint32_t>(out, p.doc);
            binary::write_le<std::uint32_t>(out, p.tf);
        }
    }
    if (!out) {
        throw DataError("failed writing index snapshot " + path.string());
    }
}

InvertedIndex load_index(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open index snapshot " + path.string());
    }
    char magic[sizeof kIndexMagic];
    if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + sizeof magic, kIndexMagic)) {
        throw DataError(path.string() + " is not an index snapshot");
    }
    if (auto version = binary::read_le<std::uint32_t>(in); version != kIndexVersion) {
        throw DataError("unsupported index snapshot version " + std::to_string(version));
    }
    InvertedIndex index;
    const auto n = binary::read_le<std::uint64_t>(in);
    if (n == 0) {
        throw DataError("index snapshot has no documents");
    }
    std::uint64_t total_len = 0;
    for (std::uint64_t d = 0; d < n; ++d) {
        index.m_doc_ids.push_back(binary::read_string(in));
        index.m_doc_lengths.push_back(binary::read_le<std::uint32_t>(in));
        total_len += index.m_doc_lengths.back();
    }
    index.m_avgdl = total_len > 0 ? static_cast<double>(total_len) / static_cast<double>(n) : 1.0;
    const auto vocab = binary::read_le<std::uint64_t>(in);
    for (std::uint64_t t = 0; t < vocab; ++t) {
        auto token = binary::read_string(in);
        const auto count = binary::read_le<std::uint64_t>(in);
        std::vector<Posting> list;
        list.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Posting p;
            p.doc = binary::read_le<std::uint32_t>(in);
            p.tf = binary::read_le<std::uint32_t>(in);
            if (p.doc >= n) {
                throw DataError("index snapshot posting refers to unknown document");
            }
            list.push_back(p);
        }
        index.m_postings.emplace(std::move(token), std::move(list));
    }
    return index;
}

}  // namespace ltr
