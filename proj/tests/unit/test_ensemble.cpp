#include <cmath>

#include "doctest.h"
#include "ltr/ensemble.hpp"
#include "support.hpp"

using namespace ltr;

namespace {

using RawRun = std::map<QueryId, std::vector<ScoredDoc>>;

RankedRun to_run(const RawRun& raw)
{
    RankedRun run;
    for (const auto& [q, docs] : raw) {
        run.set(q, docs);
    }
    return run;
}

RankedRun ordered(const QueryId& q, const std::vector<std::string>& ids)
{
    RankedRun::List list;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        list.push_back({ids[i], static_cast<double>(ids.size() - i)});
    }
    RankedRun run;
    run.set(q, list);
    return run;
}

RawRun random_raw_run(Rng& rng, std::size_t queries, std::size_t max_docs)
{
    RawRun raw;
    for (std::size_t q = 0; q < queries; ++q) {
        std::vector<ScoredDoc> docs;
        for (std::size_t d = 0; d < max_docs; ++d) {
            if (rng.bernoulli(0.7)) {
                docs.push_back({"d" + std::to_string(d), static_cast<double>(rng.below(8))});
            }
        }
        raw["q" + std::to_string(q)] = docs;
    }
    return raw;
}

std::vector<DocId> ids_of(const RankedRun& run, const QueryId& q)
{
    std::vector<DocId> out;
    for (const auto& d : *run.find(q)) {
        out.push_back(d.doc_id);
    }
    return out;
}

}  // namespace

TEST_CASE("single run keeps its ordering")
{
    auto run = ordered("q", {"c", "a", "b"});
    RunSet set;
    set.add("one", run);
    auto out = ensemble_reciprocal_rank(set);
    CHECK(ids_of(out, "q") == std::vector<DocId>{"c", "a", "b"});
    CHECK(out.find("q")->front().score == 1.0);
}

TEST_CASE("two runs average reciprocal ranks")
{
    RunSet set;
    set.add("A", ordered("q", {"x", "y"}));
    set.add("B", ordered("q", {"y", "x"}));
    auto out = ensemble_reciprocal_rank(set);
    for (const auto& d : *out.find("q")) {
        CHECK(d.score == 0.75);
    }
    // equal scores fall back to doc id order
    CHECK(ids_of(out, "q") == std::vector<DocId>{"x", "y"});
}

TEST_CASE("missing documents contribute zero but still count in n")
{
    RunSet set;
    set.add("A", ordered("q", {"x"}));
    set.add("B", ordered("q", {"y", "z"}));
    auto out = ensemble_reciprocal_rank(set);
    std::map<DocId, double> score;
    for (const auto& d : *out.find("q")) {
        score[d.doc_id] = d.score;
    }
    CHECK(score["x"] == 0.5);
    CHECK(score["y"] == 0.5);
    CHECK(score["z"] == 0.25);
}

TEST_CASE("empty run set and duplicate names are rejected")
{
    CHECK_THROWS_AS((void)ensemble_reciprocal_rank(RunSet{}), std::invalid_argument);
    RunSet set;
    set.add("A", RankedRun{});
    CHECK_THROWS_AS(set.add("A", RankedRun{}), std::invalid_argument);
}

TEST_CASE("ensemble matches brute-force oracle")
{
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 1 + rng.below(5);
        std::vector<RawRun> raws;
        RunSet set;
        for (std::size_t k = 0; k < n; ++k) {
            raws.push_back(random_raw_run(rng, 1 + rng.below(4), 1 + rng.below(30)));
            set.add("r" + std::to_string(k), to_run(raws.back()));
        }
        const auto expected = test::brute_force_ensemble(raws);
        const auto got = ensemble_reciprocal_rank(set);
        for (const auto& [q, docs] : expected) {
            const auto* list = got.find(q);
            REQUIRE(list != nullptr);
            CHECK(list->size() == docs.size());
            for (const auto& d : *list) {
                CHECK(std::abs(d.score - docs.at(d.doc_id)) <= 1e-12);
                CHECK(d.score > 0.0);
                CHECK(d.score <= 1.0);
            }
        }
    }
}

TEST_CASE("ensemble invariants")
{
    Rng rng(1234);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<RankedRun> runs;
        for (std::size_t k = 0, n = 2 + rng.below(4); k < n; ++k) {
            runs.push_back(to_run(random_raw_run(rng, 3, 20)));
        }
        RunSet forward;
        RunSet backward;
        for (std::size_t k = 0; k < runs.size(); ++k) {
            forward.add("r" + std::to_string(k), runs[k]);
            backward.add("r" + std::to_string(k), runs[runs.size() - 1 - k]);
        }
        const auto out = ensemble_reciprocal_rank(forward);
        CHECK(out == ensemble_reciprocal_rank(backward));

        RunSet identical;
        for (int k = 0; k < 3; ++k) {
            identical.add("same" + std::to_string(k), runs[0]);
        }
        const auto same = ensemble_reciprocal_rank(identical);
        for (const auto& [q, list] : runs[0].lists()) {
            CHECK(ids_of(same, q) == ids_of(runs[0], q));
        }

        RunSet twice;
        twice.add("a", out);
        twice.add("b", out);
        const auto again = ensemble_reciprocal_rank(twice);
        for (const auto& [q, _] : out.lists()) {
            CHECK(ids_of(again, q) == ids_of(out, q));
        }
    }
}

TEST_CASE("fusion examples")
{
    auto fused = fuse_two_lists(ordered("q", {"d1", "d2"}), ordered("q", {"d1", "x", "y", "d2"}));
    std::map<DocId, double> s;
    for (const auto& d : *fused.find("q")) {
        s[d.doc_id] = d.score;
    }
    CHECK(s["d1"] == 1.0);
    CHECK(s["d2"] == (0.5 + 0.25) / 2);
    CHECK(s["x"] == 0.5);
    CHECK(s["y"] == doctest::Approx(1.0 / 3.0));

    auto a_only = fuse_two_lists(ordered("q", {"a", "b"}), RankedRun{});
    CHECK(a_only.find("q")->at(1).score == 0.5);

    auto avg = fuse_two_lists(ordered("q", {"d", "e"}), ordered("q", {"f", "g", "h", "d"}));
    for (const auto& d : *avg.find("q")) {
        if (d.doc_id == "d") {
            CHECK(d.score == 0.625);
        }
    }
    CHECK_THROWS_AS((void)fuse_two_lists(RankedRun{}, RankedRun{}), std::invalid_argument);
}

TEST_CASE("fusion follows the average-or-keep rule on random pairs")
{
    Rng rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = to_run(random_raw_run(rng, 3, 25));
        RankedRun b;
        switch (trial % 3) {
        case 0: b = to_run(random_raw_run(rng, 3, 25)); break;
        case 1: b = a; break;  // identical candidates
        default: {
            // disjoint candidate sets
            RawRun raw;
            for (const auto& [q, list] : a.lists()) {
                for (std::size_t i = 0; i < list.size(); ++i) {
                    raw[q].push_back({"other" + std::to_string(i), rng.uniform()});
                }
            }
            b = to_run(raw);
        }
        }
        const auto fused = fuse_two_lists(a, b);
        for (const auto& [q, list] : fused.lists()) {
            auto ra = a.find(q) ? test::brute_force_ranks(*a.find(q)) : std::map<DocId, std::size_t>{};
            auto rb = b.find(q) ? test::brute_force_ranks(*b.find(q)) : std::map<DocId, std::size_t>{};
            std::set<DocId> expected_docs;
            for (const auto& [d, _] : ra) {
                expected_docs.insert(d);
            }
            for (const auto& [d, _] : rb) {
                expected_docs.insert(d);
            }
            CHECK(list.size() == expected_docs.size());
            for (const auto& d : list) {
                const bool in_a = ra.count(d.doc_id) != 0;
                const bool in_b = rb.count(d.doc_id) != 0;
                double expected = 0.0;
                if (in_a && in_b) {
                    expected = (1.0 / ra[d.doc_id] + 1.0 / rb[d.doc_id]) / 2.0;
                } else if (in_a) {
                    expected = 1.0 / ra[d.doc_id];
                } else {
                    REQUIRE(in_b);
                    expected = 1.0 / rb[d.doc_id];
                }
                CHECK(std::abs(d.score - expected) <= 1e-12);
                CHECK(d.score > 0.0);
                CHECK(d.score <= 1.0);
            }
        }
    }
}

TEST_CASE("reciprocal_rank_scores keeps order")
{
    auto run = ordered("q", {"b", "a", "c"});
    auto rr = reciprocal_rank_scores(run);
    CHECK(ids_of(rr, "q") == ids_of(run, "q"));
    CHECK(rr.find("q")->at(2).score == doctest::Approx(1.0 / 3.0));
}
