#include "ltr/run_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <vector>

#include "ltr/data.hpp"

namespace ltr {
namespace {

struct RankedLine {
    std::size_t rank;
    ScoredDoc doc;
};

std::vector<std::string_view> split_whitespace(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            ++i;
        }
        if (i > start) {
            fields.push_back(line.substr(start, i - start));
        }
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value)
{
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

RunFormat parse_run_format(std::string_view name)
{
    if (name == "msmarco") {
        return RunFormat::MsMarco;
    }
    if (name == "trec") {
        return RunFormat::Trec;
    }
    throw std::invalid_argument("unknown run format '" + std::string(name) + "' (valid: msmarco, trec)");
}

std::string format_double(double value)
{
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc()) {
        throw std::runtime_error("cannot format double");
    }
    return {buffer, ptr};
}

void write_run(std::ostream& out, const RankedRun& run, const RunWriteOptions& options)
{
    for (const auto& [query, list] : run.lists()) {
        const auto depth = std::min(options.topk, list.size());
        for (std::size_t i = 0; i < depth; ++i) {
            if (options.format == RunFormat::MsMarco) {
                out << query << '\t' << list[i].doc_id << '\t' << (i + 1) << '\n';
            } else {
                out << query << " Q0 " << list[i].doc_id << ' ' << (i + 1) << ' ' << format_double(list[i].score)
                    << ' ' << options.tag << '\n';
            }
        }
    }
}

void write_run(const std::filesystem::path& path, const RankedRun& run, const RunWriteOptions& options)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write run file " + path.string());
    }
    write_run(out, run, options);
    if (!out) {
        throw DataError("failed writing run file " + path.string());
    }
}

RankedRun read_run(const std::filesystem::path& path)
{
    LineReader lines(path);
    std::map<QueryId, std::vector<RankedLine>> by_query;
    while (auto line = lines.next()) {
        auto fields = split_whitespace(*line);
        if (fields.empty()) {
            continue;
        }
        RankedLine entry{};
        std::string_view rank_text;
        if (fields.size() == 3) {
            entry.doc.doc_id = std::string(fields[1]);
            rank_text = fields[2];
        } else if (fields.size() == 6) {
            entry.doc.doc_id = std::string(fields[2]);
            rank_text = fields[3];
            if (!parse_number(fields[4], entry.doc.score) || std::isnan(entry.doc.score)) {
                throw ParseError(lines.source(), lines.line_number(), "invalid score");
            }
        } else {
            throw ParseError(lines.source(), lines.line_number(),
                             "expected 3 (MS MARCO) or 6 (TREC) fields, found " + std::to_string(fields.size()));
        }
        if (!parse_number(rank_text, entry.rank) || entry.rank == 0) {
            throw ParseError(lines.source(), lines.line_number(), "invalid rank");
        }
        if (fields.size() == 3) {
            entry.doc.score = 1.0 / static_cast<double>(entry.rank);
        }
        by_query[QueryId(fields[0])].push_back(std::move(entry));
    }

    RankedRun run;
    for (auto& [query, entries] : by_query) {
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
        RankedRun::List list;
        list.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].rank != i + 1) {
                throw DataError(path.string() + ": ranks for query " + query + " are not contiguous from 1");
            }
            list.push_back(std::move(entries[i].doc));
        }
        std::vector<std::string> stored_order;
        stored_order.reserve(list.size());
        for (const auto& d : list) {
            stored_order.push_back(d.doc_id);
        }
        run.set(query, std::move(list));
        const auto& sorted = *run.find(query);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i].doc_id != stored_order[i]) {
                throw DataError(path.string() + ": ranks for query " + query + " disagree with scores");
            }
        }
    }
    return run;
}

}  // namespace ltr
