#include "ltr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ltr/random.hpp"

namespace ltr {
namespace {

class Vocabulary {
  public:
    explicit Vocabulary(std::size_t size) : m_cdf(size)
    {
        double total = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            total += 1.0 / static_cast<double>(i + 1);
            m_cdf[i] = total;
        }
        for (auto& c : m_cdf) {
            c /= total;
        }
    }

    /// Zipf-distributed background word.
    std::string background(Rng& rng) const
    {
        auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), rng.uniform());
        auto index = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - m_cdf.begin(),
                                                                       static_cast<std::ptrdiff_t>(m_cdf.size()) - 1));
        return word(index);
    }

    /// Content word from the less frequent part of the vocabulary.
    std::string content(Rng& rng) const
    {
        const auto skip = m_cdf.size() / 20;
        return word(skip + rng.below(m_cdf.size() - skip));
    }

    static std::string word(std::size_t index) { return "w" + std::to_string(index); }

  private:
    std::vector<double> m_cdf;
};

enum class PassageKind { Relevant, HardNegative, EasyNegative };

std::string make_passage(const std::vector<std::string>& query_terms, PassageKind kind, const Vocabulary& vocab,
                         Rng& rng)
{
    const std::size_t length = kind == PassageKind::Relevant ? 15 + rng.below(21) : 20 + rng.below(31);
    std::vector<std::string> tokens;
    tokens.reserve(length + 3 * query_terms.size());
    for (std::size_t i = 0; i < length; ++i) {
        tokens.push_back(vocab.background(rng));
    }

    std::vector<std::pair<std::string, std::size_t>> planted;
    switch (kind) {
    case PassageKind::Relevant: {
        // mostly full coverage; some relevant passages are noisy
        const double p = rng.bernoulli(0.85) ? 0.9 : 0.4;
        for (const auto& t : query_terms) {
            if (rng.bernoulli(p)) {
                planted.emplace_back(t, 1 + rng.below(2));
            }
        }
        break;
    }
    case PassageKind::HardNegative: {
        auto subset = query_terms;
        rng.shuffle(subset);
        const auto m = 1 + rng.below(std::max<std::size_t>(1, subset.size() - 1));
        for (std::size_t i = 0; i < m; ++i) {
            planted.emplace_back(subset[i], 1 + rng.below(4));
        }
        break;
    }
    case PassageKind::EasyNegative:
        for (const auto& t : query_terms) {
            if (rng.bernoulli(0.1)) {
                planted.emplace_back(t, 1);
            }
        }
        break;
    }
    for (const auto& [term, count] : planted) {
        for (std::size_t c = 0; c < count; ++c) {
            const auto pos = static_cast<std::ptrdiff_t>(rng.below(tokens.size() + 1));
            tokens.insert(tokens.begin() + pos, term);
        }
    }

    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            text.push_back(' ');
        }
        text += tokens[i];
    }
    return text;
}

struct GeneratedQuery {
    QueryId id;
    std::string text;
    std::vector<std::pair<DocId, std::string>> passages;
    DocId relevant;
};

GeneratedQuery make_query(QueryId id, const SynthConfig& config, const Vocabulary& vocab, std::size_t& next_pid,
                          Rng& rng)
{
    std::vector<std::string> terms;
    const auto length = 3 + rng.below(3);
    while (terms.size() < length) {
        auto t = vocab.content(rng);
        if (std::find(terms.begin(), terms.end(), t) == terms.end()) {
            terms.push_back(std::move(t));
        }
    }
    GeneratedQuery q;
    q.id = std::move(id);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        q.text += (i > 0 ? " " : "") + terms[i];
    }

    std::vector<std::pair<std::string, bool>> passages;
    passages.emplace_back(make_passage(terms, PassageKind::Relevant, vocab, rng), true);
    for (std::size_t i = 1; i < config.docs_per_query; ++i) {
        const auto kind = rng.bernoulli(0.4) ? PassageKind::HardNegative : PassageKind::EasyNegative;
        passages.emplace_back(make_passage(terms, kind, vocab, rng), false);
    }
    rng.shuffle(passages);
    for (auto& [text, relevant] : passages) {
        DocId pid = std::to_string(next_pid++);
        if (relevant) {
            q.relevant = pid;
        }
        q.passages.emplace_back(std::move(pid), std::move(text));
    }
    return q;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    for (const auto& l : lines) {
        out << l << '\n';
    }
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

}  // namespace

Corpus SynthDataset::corpus() const
{
    Corpus c;
    for (const auto& [id, text] : collection) {
        c.add(id, text);
    }
    return c;
}

SynthDataset generate_synthetic(const SynthConfig& config)
{
    if (config.queries == 0 || config.train_queries == 0 || config.vocabulary < 100) {
        throw std::invalid_argument("synthetic sizes must be positive (vocabulary >= 100)");
    }
    if (config.docs_per_query < 2) {
        throw std::invalid_argument("docs per query must be at least 2");
    }
    const Vocabulary vocab(config.vocabulary);
    Rng rng(derive_seed(config.seed, 0));
    SynthDataset data;
    std::size_t next_pid = 0;

    for (std::size_t i = 0; i < config.train_queries; ++i) {
        auto q = make_query(std::to_string(i + 1), config, vocab, next_pid, rng);
        data.train_queries.emplace_back(q.id, q.text);
        data.train_qrels.set(q.id, q.relevant, 1);
        const auto& positive = std::find_if(q.passages.begin(), q.passages.end(),
                                            [&](const auto& p) { return p.first == q.relevant; })
                                   ->second;
        for (const auto& [pid, text] : q.passages) {
            if (pid != q.relevant) {
                data.triples.push_back({q.text, positive, text});
            }
        }
        for (auto& p : q.passages) {
            data.collection.push_back(std::move(p));
        }
    }

    for (std::size_t i = 0; i < config.queries; ++i) {
        auto q = make_query(std::to_string(1000000 + i + 1), config, vocab, next_pid, rng);
        data.dev_queries.emplace_back(q.id, q.text);
        data.dev_qrels.set(q.id, q.relevant, 1);
        CandidateGroup group{q.id, q.text, {}};
        for (const auto& [pid, text] : q.passages) {
            group.candidates.push_back({pid, text});
        }
        data.dev_candidates.push_back(std::move(group));
        for (auto& p : q.passages) {
            data.collection.push_back(std::move(p));
        }
    }
    return data;
}

void write_synthetic(const SynthDataset& data, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::string> lines;

    for (const auto& [pid, text] : data.collection) {
        lines.push_back(pid + '\t' + text);
    }
    write_lines(dir / "collection.tsv", lines);

    auto write_queries = [&](const auto& queries, const char* name) {
        lines.clear();
        for (const auto& [qid, text] : queries) {
            lines.push_back(qid + '\t' + text);
        }
        write_lines(dir / name, lines);
    };
    write_queries(data.dev_queries, "queries.dev.tsv");
    write_queries(data.train_queries, "queries.train.tsv");

    lines.clear();
    for (const auto& t : data.triples) {
        lines.push_back(t.query_text + '\t' + t.positive_text + '\t' + t.negative_text);
    }
    write_lines(dir / "triples.train.tsv", lines);

    auto write_qrels = [&](const Judgments& qrels, const char* name) {
        lines.clear();
        for (const auto& qid : qrels.queries()) {
            for (const auto& pid : qrels.relevant(qid)) {
                lines.push_back(qid + " 0 " + pid + " 1");
            }
        }
        write_lines(dir / name, lines);
    };
    write_qrels(data.dev_qrels, "qrels.dev.tsv");
    write_qrels(data.train_qrels, "qrels.train.tsv");

    lines.clear();
    for (const auto& g : data.dev_candidates) {
        for (const auto& c : g.candidates) {
            lines.push_back(g.query_id + '\t' + c.doc_id + '\t' + g.query_text + '\t' + c.passage_text);
        }
    }
    write_lines(dir / "top1000.dev.tsv", lines);
}

}  // namespace ltr
