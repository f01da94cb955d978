#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ltr/metrics.hpp"
#include "support.hpp"

using namespace ltr;

namespace {

RankedRun ranked(const QueryId& q, std::size_t n)
{
    RankedRun::List list;
    for (std::size_t i = 0; i < n; ++i) {
        list.push_back({"d" + std::to_string(i + 1), static_cast<double>(n - i)});
    }
    RankedRun run;
    run.set(q, list);
    return run;
}

}  // namespace

TEST_CASE("mrr examples")
{
    Judgments j;
    j.set("q", "d1", 1);
    CHECK(mrr_at_k(ranked("q", 20), j, 10).mrr == 1.0);

    Judgments late;
    late.set("q", "d11", 1);
    CHECK(mrr_at_k(ranked("q", 20), late, 10).mrr == 0.0);
    CHECK(mrr_at_k(ranked("q", 20), late, 11).mrr == doctest::Approx(1.0 / 11));

    RankedRun two = ranked("a", 10);
    two.set("b", *ranked("b", 10).find("b"));
    Judgments both;
    both.set("a", "d2", 1);
    both.set("b", "d5", 1);
    const auto report = mrr_at_k(two, both, 10);
    CHECK(report.mrr == 0.35);
    CHECK(report.query_count == 2);
    REQUIRE(report.per_query.size() == 2);
    CHECK(report.per_query[0].value == 0.5);
}

TEST_CASE("judged queries missing from the run score zero")
{
    Judgments j;
    j.set("q", "d1", 1);
    j.set("absent", "d1", 1);
    j.set("no-rel", "d1", 0);
    const auto report = mrr_at_k(ranked("q", 5), j, 10);
    CHECK(report.mrr == 0.5);
    CHECK(report.query_count == 2);
    CHECK(report.no_relevant_count == 1);
}

TEST_CASE("bad inputs")
{
    CHECK_THROWS_AS((void)mrr_at_k(ranked("q", 3), Judgments{}, 10), DataError);
    Judgments j;
    j.set("q", "d1", 1);
    CHECK_THROWS_AS((void)mrr_at_k(ranked("q", 3), j, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)recall_at_k(ranked("q", 3), j, 0), std::invalid_argument);
}

TEST_CASE("recall examples")
{
    Judgments j;
    j.set("q", "d1", 1);
    j.set("q", "d2", 1);
    CHECK(recall_at_k(ranked("q", 10), j, 5).recall == 1.0);

    Judgments none;
    none.set("q", "d9", 1);
    CHECK(recall_at_k(ranked("q", 10), none, 5).recall == 0.0);

    Judgments half;
    half.set("q", "d1", 1);
    half.set("q", "d8", 1);
    CHECK(recall_at_k(ranked("q", 10), half, 5).recall == 0.5);

    Judgments excluded = half;
    excluded.set("empty", "x", 0);
    const auto r = recall_at_k(ranked("q", 10), excluded, 5);
    CHECK(r.excluded == 1);
    CHECK(r.query_count == 1);
}

TEST_CASE("mrr matches the linear-scan oracle and its properties")
{
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        RankedRun run;
        Judgments j;
        std::map<QueryId, std::vector<ScoredDoc>> raw;
        const auto queries = 1 + rng.below(6);
        for (std::size_t q = 0; q < queries; ++q) {
            const QueryId qid = "q" + std::to_string(q);
            const auto n = rng.below(60);
            for (std::size_t d = 0; d < n; ++d) {
                raw[qid].push_back({"d" + std::to_string(d), rng.uniform()});
                if (rng.bernoulli(0.05)) {
                    j.set(qid, "d" + std::to_string(d), 1);
                }
            }
            if (rng.bernoulli(0.8)) {
                j.set(qid, "d" + std::to_string(rng.below(80)), 1);
            }
            if (rng.bernoulli(0.9)) {
                run.set(qid, raw[qid]);
            }
        }
        if (j.empty()) {
            continue;
        }
        const auto k = 1 + rng.below(20);
        const auto report = mrr_at_k(run, j, k);
        double total = 0.0;
        std::size_t count = 0;
        for (const auto& qid : j.queries()) {
            const auto rel = j.relevant(qid);
            if (rel.empty()) {
                continue;
            }
            ++count;
            if (const auto* list = run.find(qid)) {
                total += test::linear_scan_rr(*list, rel, k);
            }
        }
        CHECK(report.mrr == doctest::Approx(count ? total / count : 0.0).epsilon(1e-12));
        CHECK(report.mrr >= 0.0);
        CHECK(report.mrr <= 1.0);
        CHECK(mrr_at_k(run, j, k + 1).mrr >= report.mrr);
    }
}

TEST_CASE("moving the first relevant doc up never lowers MRR")
{
    Judgments j;
    j.set("q", "d7", 1);
    double previous = -1.0;
    for (std::size_t pos = 12; pos >= 1; --pos) {
        RankedRun::List list;
        for (std::size_t i = 1; i <= 12; ++i) {
            const std::string id = i == pos ? "d7" : "x" + std::to_string(i);
            list.push_back({id, 100.0 - static_cast<double>(i)});
        }
        RankedRun run;
        run.set("q", list);
        const double mrr = mrr_at_k(run, j, 10).mrr;
        CHECK(mrr >= previous);
        previous = mrr;
    }
    CHECK(previous == 1.0);
}

TEST_CASE("report writers")
{
    Judgments j;
    j.set("q", "d2", 1);
    const auto run = ranked("q", 5);
    const auto mrr = mrr_at_k(run, j, 10);
    const auto recall = recall_at_k(run, j, 1000);

    std::ostringstream text;
    write_report_text(text, mrr, &recall);
    CHECK(text.str().find("MRR@10: 0.5000") != std::string::npos);

    std::ostringstream jsonl;
    write_report_jsonl(jsonl, mrr, &recall);
    std::istringstream lines(jsonl.str());
    std::string line;
    std::vector<nlohmann::json> records;
    while (std::getline(lines, line)) {
        records.push_back(nlohmann::json::parse(line));
    }
    REQUIRE(records.size() == 2);
    CHECK(records[0]["query_id"] == "q");
    CHECK(records[0]["rr"] == 0.5);
    CHECK(records[1]["aggregate"] == true);
    CHECK(records[1]["mrr"] == 0.5);
}
