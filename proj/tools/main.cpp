#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cgs/corpus/corpus.hpp"
#include "cgs/graph/concept_graph.hpp"
#include "cgs/search/search.hpp"
#include "cgs/search/train.hpp"
#include "cgs/syntax/parser.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cgs::corpus::IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_extract(const std::string& snippet_path) {
    auto snippet = cgs::syntax::parse_snippet(read_file(snippet_path));
    std::cout << cgs::graph::graph_to_json(cgs::graph::extract_graph(snippet)) << "\n";
    return 0;
}

int cmd_stats(const std::string& triplet_path) {
    auto triplets = cgs::corpus::read_triplets(triplet_path);
    cgs::graph::GraphStats total;
    for (const auto& t : triplets) {
        auto s = cgs::graph::stats(t.graph);
        total.node_count += s.node_count;
        total.edge_count += s.edge_count;
        for (size_t i = 0; i < total.nodes_by_kind.size(); ++i)
            total.nodes_by_kind[i] += s.nodes_by_kind[i];
        for (size_t i = 0; i < total.edges_by_kind.size(); ++i)
            total.edges_by_kind[i] += s.edges_by_kind[i];
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(cgs::graph::stats_to_json(total));
    doc["triplet_count"] = triplets.size();
    std::cout << doc.dump() << "\n";
    return 0;
}

int cmd_build_corpus(const std::string& pairs_path, const std::string& out_path) {
    auto pairs = cgs::corpus::read_pairs(pairs_path);
    auto [triplets, report] = cgs::corpus::build_triplets(pairs);
    cgs::corpus::write_triplets(out_path, triplets);
    nlohmann::ordered_json doc;
    doc["total"] = report.total;
    doc["parsed"] = report.parsed;
    doc["skipped_parse_error"] = report.skipped_parse_error;
    doc["skipped_empty_query"] = report.skipped_empty_query;
    std::cout << doc.dump() << "\n";
    return 0;
}

int cmd_gen_synthetic(int n, uint64_t seed, const std::string& out_path) {
    cgs::corpus::write_pairs(out_path, cgs::corpus::generate_synthetic(n, seed));
    return 0;
}

int cmd_split(const std::string& triplet_path, double train_frac, double valid_frac,
              uint64_t seed, const std::string& out_prefix) {
    auto triplets = cgs::corpus::read_triplets(triplet_path);
    auto splits = cgs::corpus::split_corpus(triplets, train_frac, valid_frac, seed);
    cgs::corpus::write_triplets(out_prefix + ".train.jsonl", splits.train);
    cgs::corpus::write_triplets(out_prefix + ".valid.jsonl", splits.valid);
    cgs::corpus::write_triplets(out_prefix + ".test.jsonl", splits.test);
    std::cout << "train=" << splits.train.size() << " valid=" << splits.valid.size()
              << " test=" << splits.test.size() << "\n";
    return 0;
}

int cmd_train(const std::string& config_path) {
    auto config = cgs::search::train_config_from_json(read_file(config_path));
    if (config.train_path.empty()) throw std::invalid_argument("config requires train_path");
    auto train_split = cgs::corpus::read_triplets(config.train_path);
    std::vector<cgs::corpus::Triplet> valid_split;
    if (!config.valid_path.empty()) valid_split = cgs::corpus::read_triplets(config.valid_path);
    auto result = cgs::search::train(config, train_split, valid_split);
    for (const auto& m : result.metrics)
        std::cout << "epoch " << m.epoch << " train_loss " << m.train_loss << " valid_mrr "
                  << m.valid_mrr << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& test_path, int pool_size,
             uint64_t seed, bool no_graph) {
    auto model = cgs::model::load_checkpoint(checkpoint_path);
    auto test = cgs::corpus::read_triplets(test_path);
    auto result = cgs::search::evaluate_mrr(model, test, pool_size, seed, !no_graph);
    std::cout << cgs::search::eval_result_to_json(result) << "\n";
    return 0;
}

int cmd_search(const std::string& checkpoint_path, const std::string& candidates_path,
               const std::string& query, int top_k, bool no_graph) {
    auto model = cgs::model::load_checkpoint(checkpoint_path);
    auto candidates = cgs::corpus::read_triplets(candidates_path);
    auto index = cgs::search::embed_candidates(model, candidates, !no_graph);
    auto query_vec = cgs::search::embed_query(model, query);
    auto order = cgs::search::rank(index, query_vec);
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (int r = 0; r < std::min<int>(top_k, static_cast<int>(order.size())); ++r) {
        int pos = order[static_cast<size_t>(r)];
        nlohmann::ordered_json item;
        item["rank"] = r + 1;
        item["id"] = index.ids[static_cast<size_t>(pos)];
        item["score"] = cgs::nn::cosine_or_floor(query_vec, index.vectors[static_cast<size_t>(pos)]);
        out.push_back(std::move(item));
    }
    std::cout << out.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concept-graph code search toolkit"};
    app.require_subcommand(1);

    std::string snippet_path, triplet_path, pairs_path, out_path, out_prefix;
    std::string config_path, checkpoint_path, test_path, candidates_path, query;
    int n = 200, pool_size = 1000, top_k = 10;
    uint64_t seed = 0;
    double train_frac = 0.8, valid_frac = 0.1;
    bool no_graph = false;

    auto* extract = app.add_subcommand("extract", "snippet file -> canonical graph JSON on stdout");
    extract->add_option("snippet", snippet_path, "snippet source file")->required();

    auto* stats = app.add_subcommand("stats", "triplet file -> aggregate graph statistics");
    stats->add_option("triplets", triplet_path, "triplet JSONL file")->required();

    auto* build = app.add_subcommand("build-corpus", "pairs file -> triplet file + report");
    build->add_option("pairs", pairs_path, "pairs JSONL file")->required();
    build->add_option("-o,--output", out_path, "output triplet JSONL file")->required();

    auto* gen = app.add_subcommand("gen-synthetic", "generate a synthetic pairs file");
    gen->add_option("-n,--count", n, "number of pairs")->required();
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("-o,--output", out_path, "output pairs JSONL file")->required();

    auto* split = app.add_subcommand("split", "triplet file -> train/valid/test files");
    split->add_option("triplets", triplet_path, "triplet JSONL file")->required();
    split->add_option("--train-frac", train_frac, "train fraction");
    split->add_option("--valid-frac", valid_frac, "validation fraction");
    split->add_option("--seed", seed, "shuffle seed");
    split->add_option("-o,--output-prefix", out_prefix, "output file prefix")->required();

    auto* train = app.add_subcommand("train", "train from a JSON config file");
    train->add_option("config", config_path, "train config JSON file")->required();

    auto* eval = app.add_subcommand("eval", "evaluate MRR of a checkpoint on a test file");
    eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    eval->add_option("--test", test_path, "test triplet JSONL file")->required();
    eval->add_option("--pool-size", pool_size, "candidate pool size");
    eval->add_option("--seed", seed, "distractor sampling seed");
    eval->add_flag("--no-graph", no_graph, "drop graph vectors at test time");

    auto* search = app.add_subcommand("search", "rank candidates for a query");
    search->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
    search->add_option("--candidates", candidates_path, "candidate triplet JSONL file")->required();
    search->add_option("--query", query, "natural-language query")->required();
    search->add_option("--top-k", top_k, "number of results");
    search->add_flag("--no-graph", no_graph, "drop graph vectors");

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) return cmd_extract(snippet_path);
        if (stats->parsed()) return cmd_stats(triplet_path);
        if (build->parsed()) return cmd_build_corpus(pairs_path, out_path);
        if (gen->parsed()) return cmd_gen_synthetic(n, seed, out_path);
        if (split->parsed()) return cmd_split(triplet_path, train_frac, valid_frac, seed, out_prefix);
        if (train->parsed()) return cmd_train(config_path);
        if (eval->parsed()) return cmd_eval(checkpoint_path, test_path, pool_size, seed, no_graph);
        if (search->parsed()) return cmd_search(checkpoint_path, candidates_path, query, top_k, no_graph);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
