#include "ltr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "ltr/data.hpp"
#include "ltr/ensemble.hpp"
#include "ltr/metrics.hpp"
#include "ltr/model.hpp"
#include "ltr/retrieval.hpp"
#include "ltr/run_io.hpp"
#include "ltr/synth.hpp"

namespace ltr::cli {
namespace {

namespace fs = std::filesystem;

struct RunOutput {
    std::string path;
    std::string format = "msmarco";
    std::size_t topk = 1000;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--output,-o", path, "Run file to write")->required();
        cmd.add_option("--format", format, "Run file format")->check(CLI::IsMember({"msmarco", "trec"}));
        cmd.add_option("--topk", topk, "Documents per query written")->check(CLI::PositiveNumber);
    }

    void write(const RankedRun& run) const
    {
        write_run(fs::path(path), run, {parse_run_format(format), topk, "ltr"});
    }
};

struct SynthArgs {
    std::string output_dir;
    std::size_t queries = 200;
    std::optional<std::size_t> train_queries;
    std::size_t docs_per_query = 100;
    std::size_t vocabulary = 5000;
    std::uint64_t seed = 0;
};

struct TrainArgs {
    std::string triples;
    std::string collection;
    std::string loss = "softmax";
    std::string arch = "linear";
    std::size_t hidden = 64;
    std::size_t list_size = 12;
    std::size_t batch_size = 32;
    std::size_t steps = 1000;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    std::size_t checkpoint_every = 50000;
    std::string output;
    std::string log;
};

struct RetrieveArgs {
    std::string collection;
    std::string queries;
    std::size_t k = 1000;
    std::string load_index;
    std::string save_index;
    RunOutput out;
};

struct RerankArgs {
    std::string model;
    std::string candidates;
    std::string run;
    std::string queries;
    std::string collection;
    RunOutput out;
};

struct EnsembleArgs {
    std::vector<std::string> runs;
    RunOutput out;
};

struct FuseArgs {
    std::string run_a;
    std::string run_b;
    RunOutput out;
};

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::size_t k = 10;
    std::size_t recall_k = 1000;
    std::string jsonl;
};

std::optional<InvertedIndex> maybe_index(const std::string& collection_path)
{
    if (collection_path.empty()) {
        return std::nullopt;
    }
    return build_index(parse_collection(collection_path));
}

int cmd_synth(const SynthArgs& a, std::ostream& out)
{
    SynthConfig config;
    config.queries = a.queries;
    config.train_queries = a.train_queries.value_or(a.queries);
    config.docs_per_query = a.docs_per_query;
    config.vocabulary = a.vocabulary;
    config.seed = a.seed;
    const auto data = generate_synthetic(config);
    write_synthetic(data, a.output_dir);
    out << "wrote " << data.collection.size() << " passages, " << data.dev_queries.size() << " dev queries, "
        << data.triples.size() << " triples to " << a.output_dir << '\n';
    return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out)
{
    TrainConfig config;
    config.loss = parse_loss_kind(a.loss);
    config.architecture = parse_architecture(a.arch);
    config.hidden_dim = a.hidden;
    config.list_size = a.list_size;
    config.batch_size = a.batch_size;
    config.steps = a.steps;
    config.learning_rate = a.lr;
    config.seed = a.seed;
    config.checkpoint_every = a.checkpoint_every;

    const auto index = maybe_index(a.collection);
    const Featurizer featurize(index ? &*index : nullptr);
    const auto triples = parse_triples(a.triples);
    const auto text_lists = group_triples(triples, config.list_size, config.seed);
    std::vector<TrainingList> lists;
    lists.reserve(text_lists.size());
    for (const auto& l : text_lists) {
        lists.push_back(featurize_list(l, featurize));
    }

    const fs::path output(a.output);
    const fs::path log_path(a.log.empty() ? a.output + ".log" : a.log);
    std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
    if (!log) {
        throw DataError("cannot write training log " + log_path.string());
    }
    log << "step\tloss\n";

    TrainHooks hooks;
    hooks.on_step = [&](std::size_t step, double loss) { log << step << '\t' << format_double(loss) << '\n'; };
    hooks.on_checkpoint = [&](std::size_t step, const ScorerParams& params) {
        if (step != config.steps) {
            save_checkpoint(params, output.string() + ".step" + std::to_string(step));
        }
    };
    const auto params = train(lists, config, hooks);
    save_checkpoint(params, output);
    out << "trained " << to_string(config.architecture) << " scorer on " << lists.size() << " lists for "
        << config.steps << " steps; checkpoint " << output.string() << '\n';
    return kExitOk;
}

int cmd_retrieve(const RetrieveArgs& a, std::ostream& out)
{
    InvertedIndex index;
    if (!a.load_index.empty()) {
        index = load_index(a.load_index);
    } else if (!a.collection.empty()) {
        index = build_index(parse_collection(a.collection));
    } else {
        throw std::invalid_argument("retrieve needs --collection or --load-index");
    }
    if (!a.save_index.empty()) {
        save_index(index, a.save_index);
    }
    RankedRun run;
    for (const auto& [qid, text] : parse_queries(a.queries)) {
        const auto tokens = tokenize(text);
        run.set(qid, bm25_search(index, tokens, a.k));
    }
    a.out.write(run);
    out << "retrieved candidates for " << run.size() << " queries\n";
    return kExitOk;
}

int cmd_rerank(const RerankArgs& a, std::ostream& out, std::ostream& err)
{
    std::optional<Corpus> corpus;
    std::optional<InvertedIndex> index;
    if (!a.collection.empty()) {
        corpus = parse_collection(a.collection);
        index = build_index(*corpus);
    }
    std::vector<CandidateGroup> candidates;
    if (!a.candidates.empty()) {
        candidates = parse_top1000(a.candidates, [&](const std::string& w) { err << "warning: " << w << '\n'; });
    } else if (!a.run.empty()) {
        if (a.queries.empty() || !corpus) {
            throw std::invalid_argument("--run needs --queries and --collection for passage text");
        }
        std::map<QueryId, std::string> query_text;
        for (auto& [qid, text] : parse_queries(a.queries)) {
            query_text.emplace(std::move(qid), std::move(text));
        }
        const auto candidate_run = read_run(a.run);
        for (const auto& [qid, list] : candidate_run.lists()) {
            auto q = query_text.find(qid);
            if (q == query_text.end()) {
                throw DataError("query " + qid + " from " + a.run + " is missing from " + a.queries);
            }
            CandidateGroup group{qid, q->second, {}};
            for (const auto& d : list) {
                const auto* passage = corpus->find(d.doc_id);
                if (passage == nullptr) {
                    throw DataError("doc " + d.doc_id + " from " + a.run + " is missing from the collection");
                }
                group.candidates.push_back({d.doc_id, passage->text});
            }
            candidates.push_back(std::move(group));
        }
    } else {
        throw std::invalid_argument("rerank needs --candidates or --run");
    }

    const Featurizer featurize(index ? &*index : nullptr);
    const auto params = load_checkpoint(a.model, Featurizer::kFeatureDim);
    const auto run = rerank(params, featurize_groups(candidates, featurize));
    a.out.write(run);
    out << "reranked " << run.size() << " queries\n";
    return kExitOk;
}

int cmd_ensemble(const EnsembleArgs& a, std::ostream& out)
{
    RunSet runs;
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        runs.add(std::to_string(i + 1) + ":" + a.runs[i], read_run(a.runs[i]));
    }
    const auto run = ensemble_reciprocal_rank(runs);
    a.out.write(run);
    out << "ensembled " << runs.size() << " runs over " << run.size() << " queries\n";
    return kExitOk;
}

int cmd_fuse(const FuseArgs& a, std::ostream& out)
{
    const auto run = fuse_two_lists(read_run(a.run_a), read_run(a.run_b));
    a.out.write(run);
    out << "fused runs over " << run.size() << " queries\n";
    return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out)
{
    const auto run = read_run(a.run);
    const auto judgments = parse_qrels(a.qrels);
    const auto mrr = mrr_at_k(run, judgments, a.k);
    const auto recall = recall_at_k(run, judgments, a.recall_k);
    write_report_text(out, mrr, &recall);
    if (!a.jsonl.empty()) {
        std::ofstream jsonl(a.jsonl, std::ios::binary | std::ios::trunc);
        if (!jsonl) {
            throw DataError("cannot write " + a.jsonl);
        }
        write_report_jsonl(jsonl, mrr, &recall);
    }
    return kExitOk;
}

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<std::string> merge_config(std::vector<std::string> args, const std::string& config_path)
{
    std::ifstream in(config_path);
    if (!in) {
        throw DataError("cannot open config " + config_path);
    }
    std::set<std::string> given;
    for (const auto& arg : args) {
        if (arg.rfind("--", 0) == 0) {
            given.insert(arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2));
        }
    }
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(config_path + ":" + std::to_string(number) + ": expected key=value");
        }
        auto key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        if (key.empty() || given.contains(key)) {
            continue;
        }
        args.push_back("--" + key);
        args.push_back(trim(line.substr(eq + 1)));
    }
    return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Learning-to-rank toolkit: train, rerank, retrieve, ensemble, fuse and evaluate ranked runs",
                 "ltr"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic synthetic benchmark");
    synth_cmd->add_option("--output-dir", synth.output_dir, "Directory for generated files")->required();
    synth_cmd->add_option("--queries", synth.queries, "Dev queries")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--train-queries", synth.train_queries, "Training queries (default: --queries)")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--docs-per-query", synth.docs_per_query, "Passages per query")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    synth_cmd->add_option("--vocabulary", synth.vocabulary, "Vocabulary size")
        ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()));
    synth_cmd->add_option("--seed", synth.seed, "Random seed");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train a ranking scorer from a triples file");
    train_cmd->add_option("--triples", tr.triples, "Triples TSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--collection", tr.collection, "Collection TSV for IDF/BM25 features")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--loss", tr.loss, "Ranking loss")->check(CLI::IsMember({"pointwise", "pairwise", "softmax"}));
    train_cmd->add_option("--arch", tr.arch, "Scorer architecture")->check(CLI::IsMember({"linear", "mlp"}));
    train_cmd->add_option("--hidden", tr.hidden, "MLP hidden width")->check(CLI::PositiveNumber);
    train_cmd->add_option("--list-size", tr.list_size, "Items per training list")
        ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
    train_cmd->add_option("--batch-size", tr.batch_size, "Lists per step")->check(CLI::PositiveNumber);
    train_cmd->add_option("--steps", tr.steps, "Optimizer steps")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--lr", tr.lr, "Adam learning rate")->check(CLI::PositiveNumber);
    train_cmd->add_option("--seed", tr.seed, "Random seed");
    train_cmd->add_option("--checkpoint-every", tr.checkpoint_every, "Steps between checkpoints")
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--output,-o", tr.output, "Final checkpoint path")->required();
    train_cmd->add_option("--log", tr.log, "Training log (default: <output>.log)");

    RetrieveArgs re;
    auto* retrieve_cmd = app.add_subcommand("retrieve", "BM25 top-k retrieval over a collection");
    retrieve_cmd->add_option("--collection", re.collection, "Collection TSV")->check(CLI::ExistingFile);
    retrieve_cmd->add_option("--queries", re.queries, "Queries TSV")->required()->check(CLI::ExistingFile);
    retrieve_cmd->add_option("--k", re.k, "Candidates per query")->check(CLI::PositiveNumber);
    retrieve_cmd->add_option("--load-index", re.load_index, "Index snapshot to load")->check(CLI::ExistingFile);
    retrieve_cmd->add_option("--save-index", re.save_index, "Write the index snapshot here");
    re.out.add_to(*retrieve_cmd);

    RerankArgs rr;
    auto* rerank_cmd = app.add_subcommand("rerank", "Score and re-rank candidate passages with a trained scorer");
    rerank_cmd->add_option("--model", rr.model, "Scorer checkpoint")->required()->check(CLI::ExistingFile);
    auto* cand_opt =
        rerank_cmd->add_option("--candidates", rr.candidates, "top1000 TSV")->check(CLI::ExistingFile);
    auto* run_opt = rerank_cmd->add_option("--run", rr.run, "Candidate run file")->check(CLI::ExistingFile);
    cand_opt->excludes(run_opt);
    rerank_cmd->add_option("--queries", rr.queries, "Queries TSV (with --run)")->check(CLI::ExistingFile);
    rerank_cmd->add_option("--collection", rr.collection, "Collection TSV")->check(CLI::ExistingFile);
    rr.out.add_to(*rerank_cmd);

    EnsembleArgs en;
    auto* ensemble_cmd = app.add_subcommand("ensemble", "Average reciprocal rank over several runs");
    ensemble_cmd->add_option("--run", en.runs, "Run file (repeat for each run)")
        ->required()
        ->check(CLI::ExistingFile);
    en.out.add_to(*ensemble_cmd);

    FuseArgs fu;
    auto* fuse_cmd = app.add_subcommand("fuse", "Fuse two reranked candidate lists");
    fuse_cmd->add_option("--run-a", fu.run_a, "First run file")->required()->check(CLI::ExistingFile);
    fuse_cmd->add_option("--run-b", fu.run_b, "Second run file")->required()->check(CLI::ExistingFile);
    fu.out.add_to(*fuse_cmd);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "MRR@k and recall@k of a run");
    eval_cmd->add_option("--run", ev.run, "Run file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--qrels", ev.qrels, "Qrels file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--k", ev.k, "MRR cutoff")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--recall-k", ev.recall_k, "Recall cutoff")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--jsonl", ev.jsonl, "Write per-query JSON lines here");

    try {
        std::vector<std::string> args = raw_args;
        // --config is handled before CLI11 sees the arguments so that flags override it
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::optional<std::string> path;
            std::size_t erase = 0;
            if (args[i] == "--config" && i + 1 < args.size()) {
                path = args[i + 1];
                erase = 2;
            } else if (args[i].rfind("--config=", 0) == 0) {
                path = args[i].substr(9);
                erase = 1;
            }
            if (path) {
                args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                           args.begin() + static_cast<std::ptrdiff_t>(i + erase));
                args = merge_config(std::move(args), *path);
                break;
            }
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);

        if (*synth_cmd) {
            return cmd_synth(synth, out);
        }
        if (*train_cmd) {
            return cmd_train(tr, out);
        }
        if (*retrieve_cmd) {
            return cmd_retrieve(re, out);
        }
        if (*rerank_cmd) {
            return cmd_rerank(rr, out, err);
        }
        if (*ensemble_cmd) {
            return cmd_ensemble(en, out);
        }
        if (*fuse_cmd) {
            return cmd_fuse(fu, out);
        }
        if (*eval_cmd) {
            return cmd_eval(ev, out);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace ltr::cli
