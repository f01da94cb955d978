#pragma once

// Test-only oracles. None of these call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "ltr/core.hpp"
#include "ltr/losses.hpp"
#include "ltr/random.hpp"

namespace ltr::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag)
    {
        static std::uint64_t counter = 0;
        m_path = std::filesystem::temp_directory_path()
                 / ("ltr-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    ~TempDir() { std::filesystem::remove_all(m_path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return m_path; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return m_path / name; }

  private:
    std::filesystem::path m_path;
};

inline void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Random batch: scores in [-3, 3], binary labels, and (optionally) a random
/// padding tail per list. Every list keeps at least one real entry.
inline ListBatch random_batch(Rng& rng, std::size_t rows, std::size_t cols, bool with_mask)
{
    ListBatch b{Matrix(rows, cols), Matrix(rows, cols), Mask(rows, cols, 1)};
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t real = with_mask ? 1 + rng.below(cols) : cols;
        for (std::size_t j = 0; j < cols; ++j) {
            b.scores(i, j) = rng.uniform(-3.0, 3.0);
            if (j < real) {
                b.labels(i, j) = rng.bernoulli(0.3) ? 1.0 : 0.0;
            } else {
                b.mask(i, j) = 0;
            }
        }
    }
    return b;
}

struct GradCheck {
    double rel_error = 0.0;  ///< ||analytic - numeric|| / max(||analytic||, ||numeric||)
    bool ok = true;
};

/// Central finite differences on every score entry, compared with `analytic`
/// as a norm-wise relative error over the whole batch gradient.
inline GradCheck finite_difference_check(const std::function<double(const ListBatch&)>& loss_fn, ListBatch batch,
                                         const Matrix& analytic, double step = 1e-5, double tol = 1e-6)
{
    double diff2 = 0.0;
    double a2 = 0.0;
    double n2 = 0.0;
    for (std::size_t i = 0; i < batch.scores.rows(); ++i) {
        for (std::size_t j = 0; j < batch.scores.cols(); ++j) {
            const double saved = batch.scores(i, j);
            batch.scores(i, j) = saved + step;
            const double up = loss_fn(batch);
            batch.scores(i, j) = saved - step;
            const double down = loss_fn(batch);
            batch.scores(i, j) = saved;
            const double numeric = (up - down) / (2 * step);
            const double a = analytic(i, j);
            diff2 += (a - numeric) * (a - numeric);
            a2 += a * a;
            n2 += numeric * numeric;
        }
    }
    GradCheck out;
    const double denom = std::sqrt(std::max(a2, n2));
    out.rel_error = denom > 0 ? std::sqrt(diff2) / denom : std::sqrt(diff2);
    out.ok = out.rel_error <= tol;
    return out;
}

/// Rank of each doc by direct pairwise counting: 1 + number of docs that beat it.
inline std::map<DocId, std::size_t> brute_force_ranks(const std::vector<ScoredDoc>& docs)
{
    std::map<DocId, std::size_t> ranks;
    for (const auto& d : docs) {
        std::size_t beaten_by = 0;
        for (const auto& o : docs) {
            if (o.score > d.score || (o.score == d.score && o.doc_id < d.doc_id)) {
                ++beaten_by;
            }
        }
        ranks[d.doc_id] = beaten_by + 1;
    }
    return ranks;
}

/// (1/n) * sum_k 1/P_k for every (query, doc) seen in any input list.
inline std::map<QueryId, std::map<DocId, double>> brute_force_ensemble(
    const std::vector<std::map<QueryId, std::vector<ScoredDoc>>>& runs)
{
    std::set<std::pair<QueryId, DocId>> keys;
    for (const auto& run : runs) {
        for (const auto& [q, docs] : run) {
            for (const auto& d : docs) {
                keys.emplace(q, d.doc_id);
            }
        }
    }
    std::map<QueryId, std::map<DocId, double>> out;
    for (const auto& [q, doc] : keys) {
        double sum = 0.0;
        for (const auto& run : runs) {
            auto it = run.find(q);
            if (it == run.end()) {
                continue;
            }
            auto ranks = brute_force_ranks(it->second);
            if (auto r = ranks.find(doc); r != ranks.end()) {
                sum += 1.0 / static_cast<double>(r->second);
            }
        }
        out[q][doc] = sum / static_cast<double>(runs.size());
    }
    return out;
}

/// Linear scan for the first relevant doc within the cutoff.
inline double linear_scan_rr(const std::vector<ScoredDoc>& ranked, const std::set<DocId>& relevant, std::size_t k)
{
    std::size_t rank = 0;
    for (const auto& d : ranked) {
        ++rank;
        if (rank > k) {
            break;
        }
        if (relevant.count(d.doc_id) != 0) {
            return 1.0 / static_cast<double>(rank);
        }
    }
    return 0.0;
}

/// Okapi BM25 straight from its definition, counting everything from raw token lists.
inline double direct_bm25(const std::vector<std::vector<std::string>>& docs, std::size_t doc,
                          const std::vector<std::string>& query, double k1 = 1.2, double b = 0.75)
{
    const double n = static_cast<double>(docs.size());
    double total_len = 0;
    for (const auto& d : docs) {
        total_len += static_cast<double>(d.size());
    }
    const double avgdl = total_len / n;
    std::set<std::string> terms(query.begin(), query.end());
    double score = 0.0;
    for (const auto& t : terms) {
        double df = 0;
        for (const auto& d : docs) {
            df += std::find(d.begin(), d.end(), t) != d.end() ? 1 : 0;
        }
        const double tf = static_cast<double>(std::count(docs[doc].begin(), docs[doc].end(), t));
        if (tf == 0) {
            continue;
        }
        const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
        const double len = static_cast<double>(docs[doc].size());
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avgdl));
    }
    return score;
}

}  // namespace ltr::test
