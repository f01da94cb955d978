#include "ltr/data.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ltr/random.hpp"

namespace ltr {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : DataError(source + ":" + std::to_string(line) + ": " + what), m_line(line)
{}

LineReader::LineReader(const std::filesystem::path& path) : m_in(path), m_source(path.string())
{
    if (!m_in) {
        throw DataError("cannot open " + m_source);
    }
}

std::optional<std::string> LineReader::next()
{
    std::string line;
    if (!std::getline(m_in, line)) {
        return std::nullopt;
    }
    ++m_line;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::vector<std::string_view> split_tabs(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::optional<Triple> TripleReader::next()
{
    auto line = m_lines.next();
    if (!line) {
        return std::nullopt;
    }
    auto fields = split_tabs(*line);
    if (fields.size() != 3) {
        throw ParseError(m_lines.source(), m_lines.line_number(),
                         "expected 3 tab-separated fields, found " + std::to_string(fields.size()));
    }
    for (auto f : fields) {
        if (f.empty()) {
            throw ParseError(m_lines.source(), m_lines.line_number(), "empty field");
        }
    }
    return Triple{std::string(fields[0]), std::string(fields[1]), std::string(fields[2])};
}

std::vector<Triple> parse_triples(const std::filesystem::path& path)
{
    TripleReader reader(path);
    std::vector<Triple> out;
    while (auto t = reader.next()) {
        out.push_back(std::move(*t));
    }
    return out;
}

std::vector<TextList> group_triples(std::span<const Triple> triples, std::size_t list_size, std::uint64_t seed)
{
    if (list_size < 2) {
        throw std::invalid_argument("list_size must be at least 2");
    }
    const std::size_t per_list = list_size - 1;
    std::vector<TextList> out;
    std::uint64_t group_index = 0;

    std::size_t begin = 0;
    while (begin < triples.size()) {
        const auto& head = triples[begin];
        std::size_t end = begin + 1;
        while (end < triples.size() && triples[end].query_text == head.query_text
               && triples[end].positive_text == head.positive_text) {
            ++end;
        }

        std::vector<std::string> negatives;
        std::unordered_set<std::string_view> seen;
        for (std::size_t i = begin; i < end; ++i) {
            if (seen.insert(triples[i].negative_text).second) {
                negatives.push_back(triples[i].negative_text);
            }
        }
        Rng rng(derive_seed(seed, group_index++));
        rng.shuffle(negatives);

        for (std::size_t chunk = 0; chunk < negatives.size(); chunk += per_list) {
            const std::size_t n = std::min(per_list, negatives.size() - chunk);
            TextList list{head.query_text, {}};
            list.entries.reserve(list_size);
            for (std::size_t i = 0; i < n; ++i) {
                list.entries.push_back({negatives[chunk + i], 0.0, true});
            }
            const auto pos = static_cast<std::ptrdiff_t>(rng.below(n + 1));
            list.entries.insert(list.entries.begin() + pos, {head.positive_text, 1.0, true});
            while (list.entries.size() < list_size) {
                list.entries.push_back({std::string(), 0.0, false});
            }
            out.push_back(std::move(list));
        }
        begin = end;
    }
    return out;
}

std::vector<double> Featurizer::operator()(std::string_view query_text, std::string_view passage_text) const
{
    const auto q = tokenize(query_text);
    const auto p = tokenize(passage_text);
    return features(q, p);
}

std::vector<double> Featurizer::features(std::span<const std::string> query_tokens,
                                         std::span<const std::string> passage_tokens) const
{
    std::vector<double> f(kFeatureDim, 0.0);
    const std::set<std::string> query_set(query_tokens.begin(), query_tokens.end());
    std::unordered_map<std::string_view, std::size_t> tf;
    for (const auto& t : passage_tokens) {
        ++tf[t];
    }

    double overlap = 0.0;
    double idf_total = 0.0;
    double idf_matched = 0.0;
    double occurrences = 0.0;
    for (const auto& t : query_set) {
        const double idf = m_index != nullptr ? m_index->idf(t) : 1.0;
        idf_total += idf;
        if (auto it = tf.find(t); it != tf.end()) {
            overlap += 1.0;
            idf_matched += idf;
            occurrences += static_cast<double>(it->second);
        }
    }
    const auto qlen = static_cast<double>(query_tokens.size());
    const auto plen = static_cast<double>(passage_tokens.size());

    f[0] = overlap;
    f[1] = query_set.empty() ? 0.0 : overlap / static_cast<double>(query_set.size());
    f[2] = idf_total > 0 ? idf_matched / idf_total : 0.0;
    f[3] = std::log1p(qlen);
    f[4] = std::log1p(plen);
    f[5] = qlen > 0 ? plen / qlen : 0.0;
    f[6] = m_index != nullptr ? bm25_score(*m_index, query_tokens, passage_tokens) : 0.0;
    f[7] = plen > 0 ? occurrences / plen : 0.0;
    return f;
}

TrainingList featurize_list(const TextList& list, const Featurizer& featurize)
{
    const auto query_tokens = tokenize(list.query_text);
    TrainingList out{list.query_text, {}};
    out.items.reserve(list.entries.size());
    for (const auto& e : list.entries) {
        if (e.real) {
            out.items.push_back({featurize.features(query_tokens, tokenize(e.passage_text)), e.label, true});
        } else {
            out.items.push_back({std::vector<double>(Featurizer::kFeatureDim, 0.0), 0.0, false});
        }
    }
    return out;
}

Judgments parse_qrels(const std::filesystem::path& path)
{
    LineReader lines(path);
    Judgments judgments;
    while (auto line = lines.next()) {
        if (line->find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::istringstream fields(*line);
        std::string qid, iteration, pid, grade_text, extra;
        if (!(fields >> qid >> iteration >> pid >> grade_text) || (fields >> extra)) {
            throw ParseError(lines.source(), lines.line_number(), "expected `qid 0 pid grade`");
        }
        int grade = 0;
        auto [ptr, ec] = std::from_chars(grade_text.data(), grade_text.data() + grade_text.size(), grade);
        if (ec != std::errc() || ptr != grade_text.data() + grade_text.size() || grade < 0) {
            throw ParseError(lines.source(), lines.line_number(), "invalid grade '" + grade_text + "'");
        }
        judgments.set(qid, pid, grade);
    }
    return judgments;
}

std::vector<CandidateGroup> parse_top1000(const std::filesystem::path& path, const WarningSink& warn)
{
    LineReader lines(path);
    std::vector<CandidateGroup> groups;
    std::unordered_map<QueryId, std::size_t> group_of;
    std::unordered_map<QueryId, std::unordered_set<DocId>> seen;
    while (auto line = lines.next()) {
        if (line->empty()) {
            continue;
        }
        auto fields = split_tabs(*line);
        if (fields.size() != 4) {
            throw ParseError(lines.source(), lines.line_number(),
                             "expected 4 tab-separated fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ParseError(lines.source(), lines.line_number(), "empty qid or pid");
        }
        QueryId qid(fields[0]);
        DocId pid(fields[1]);
        if (!seen[qid].insert(pid).second) {
            if (warn) {
                warn(lines.source() + ":" + std::to_string(lines.line_number()) + ": duplicate pid " + pid
                     + " for query " + qid + " ignored");
            }
            continue;
        }
        auto [it, inserted] = group_of.try_emplace(qid, groups.size());
        if (inserted) {
            groups.push_back({qid, std::string(fields[2]), {}});
        }
        groups[it->second].candidates.push_back({std::move(pid), std::string(fields[3])});
    }
    return groups;
}

Corpus parse_collection(const std::filesystem::path& path)
{
    LineReader lines(path);
    Corpus corpus;
    while (auto line = lines.next()) {
        if (line->empty()) {
            continue;
        }
        auto fields = split_tabs(*line);
        if (fields.size() != 2 || fields[0].empty()) {
            throw ParseError(lines.source(), lines.line_number(), "expected `pid \\t passage`");
        }
        try {
            corpus.add(DocId(fields[0]), std::string(fields[1]));
        } catch (const DuplicateIdError& e) {
            throw ParseError(lines.source(), lines.line_number(), e.what());
        }
    }
    return corpus;
}

std::vector<std::pair<QueryId, std::string>> parse_queries(const std::filesystem::path& path)
{
    LineReader lines(path);
    std::vector<std::pair<QueryId, std::string>> out;
    std::unordered_set<QueryId> seen;
    while (auto line = lines.next()) {
        if (line->empty()) {
            continue;
        }
        auto fields = split_tabs(*line);
        if (fields.size() != 2 || fields[0].empty()) {
            throw ParseError(lines.source(), lines.line_number(), "expected `qid \\t query`");
        }
        if (!seen.emplace(fields[0]).second) {
            throw ParseError(lines.source(), lines.line_number(), "duplicate qid " + std::string(fields[0]));
        }
        out.emplace_back(std::string(fields[0]), std::string(fields[1]));
    }
    return out;
}

std::vector<QueryGroup> featurize_groups(std::span<const CandidateGroup> groups, const Featurizer& featurize)
{
    std::vector<QueryGroup> out;
    out.reserve(groups.size());
    for (const auto& g : groups) {
        const auto query_tokens = tokenize(g.query_text);
        QueryGroup group{g.query_id, {}};
        group.items.reserve(g.candidates.size());
        for (const auto& c : g.candidates) {
            group.items.push_back({c.doc_id, featurize.features(query_tokens, tokenize(c.passage_text)), 0.0});
        }
        out.push_back(std::move(group));
    }
    return out;
}

}  // namespace ltr
