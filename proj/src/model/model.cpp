#include "cgs/model/model.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cgs/util/rng.hpp"

namespace cgs::model {

using nn::ParamStore;
using nn::Tape;
using nn::Tensor;

namespace {

std::vector<std::pair<std::string, std::vector<int>>> param_shapes(const ModelConfig& cfg,
                                                                   int vocab_size) {
    const int d = cfg.embed_dim;
    std::vector<std::pair<std::string, std::vector<int>>> shapes;
    shapes.emplace_back("embed", std::vector<int>{vocab_size, d});
    shapes.emplace_back("kind", std::vector<int>{graph::kNodeKindCount, d});
    for (int l = 0; l < cfg.gat_layers; ++l) {
        std::string p = "gat" + std::to_string(l) + ".";
        shapes.emplace_back(p + "w_v", std::vector<int>{d, d});
        shapes.emplace_back(p + "w_s", std::vector<int>{d, d});
        shapes.emplace_back(p + "w_t", std::vector<int>{d, d});
        shapes.emplace_back(p + "rel", std::vector<int>{kRelationTableRows, d});
        shapes.emplace_back(p + "attn", std::vector<int>{d});
        shapes.emplace_back(p + "bias", std::vector<int>{d});
    }
    shapes.emplace_back("pool.gate_w", std::vector<int>{d});
    shapes.emplace_back("pool.gate_b", std::vector<int>{1});
    shapes.emplace_back("pool.proj", std::vector<int>{d, d});
    for (const char* head : {"query_head", "code_head"}) {
        std::string p = std::string(head) + ".";
        shapes.emplace_back(p + "w1", std::vector<int>{d, d});
        shapes.emplace_back(p + "b1", std::vector<int>{d});
        shapes.emplace_back(p + "w2", std::vector<int>{d, d});
        shapes.emplace_back(p + "b2", std::vector<int>{d});
    }
    return shapes;
}

}  // namespace

ParamStore init_model_params(const ModelConfig& config, int vocab_size) {
    util::Rng rng(config.seed);
    ParamStore params;
    // Shapes are listed in a fixed order so the draw sequence is stable.
    for (const auto& [name, shape] : param_shapes(config, vocab_size)) {
        Tensor t = Tensor::zeros(shape);
        for (double& x : t.data) x = rng.next_double(-0.1, 0.1);
        params.emplace(name, std::move(t));
    }
    return params;
}

Batch make_batch(const ModelConfig& config, const Vocab& vocab,
                 const std::vector<const corpus::Triplet*>& triplets) {
    Batch batch;
    for (const corpus::Triplet* t : triplets) {
        batch.query_ids.push_back(
            encode_subtokens(vocab, tokenize_query(t->query_text), config.max_query_tokens));
        batch.code_ids.push_back(
            encode_subtokens(vocab, tokenize_code(t->code_text), config.max_code_tokens));
        batch.graphs.push_back(&t->graph);
    }
    return batch;
}

ModelForward::ModelForward(Tape& tape, const ParamStore& params, const ModelConfig& config)
    : tape_(tape), config_(config) {
    for (const auto& [name, tensor] : params) leaves_[name] = tape_.leaf(tensor);
}

Tape::Id ModelForward::param(const std::string& name) const {
    auto it = leaves_.find(name);
    if (it == leaves_.end()) throw std::out_of_range("unknown parameter '" + name + "'");
    return it->second;
}

Tape::Id ModelForward::encode_text(const std::vector<int>& subtoken_ids, TextHead head) {
    const std::string p = head == TextHead::Query ? "query_head." : "code_head.";
    Tape::Id pooled = tape_.gather_mean(param("embed"), subtoken_ids);
    Tape::Id hidden = tape_.tanh_op(tape_.affine(param(p + "w1"), param(p + "b1"), pooled));
    return tape_.affine(param(p + "w2"), param(p + "b2"), hidden);
}

Tape::Id ModelForward::init_node_features(const Vocab& vocab, const graph::ConceptGraph& g) {
    if (g.nodes.empty()) throw EmptyGraph();
    std::vector<Tape::Id> rows;
    rows.reserve(g.nodes.size());
    for (const auto& node : g.nodes) {
        std::vector<int> ids =
            encode_subtokens(vocab, subtokenize(node.name), config_.max_code_tokens);
        Tape::Id name_emb = tape_.gather_mean(param("embed"), ids);
        Tape::Id kind_emb = tape_.row(param("kind"), static_cast<int>(node.kind));
        rows.push_back(tape_.add(name_emb, kind_emb));
    }
    return tape_.stack_rows(rows);
}

Tape::Id ModelForward::gat_layer(int layer, const graph::ConceptGraph& g, Tape::Id features) {
    const std::string p = "gat" + std::to_string(layer) + ".";
    const Tape::Id w_v = param(p + "w_v");
    const Tape::Id w_s = param(p + "w_s");
    const Tape::Id w_t = param(p + "w_t");
    const Tape::Id rel = param(p + "rel");
    const Tape::Id attn = param(p + "attn");
    const Tape::Id bias = param(p + "bias");
    const int n = static_cast<int>(g.nodes.size());

    // Message edges: forward, inverse, and a self-loop per node.
    struct Message {
        int source;
        int relation;
    };
    std::vector<std::vector<Message>> incoming(static_cast<size_t>(n));
    for (const auto& e : g.edges) {
        incoming[static_cast<size_t>(e.dst)].push_back({e.src, static_cast<int>(e.kind)});
        incoming[static_cast<size_t>(e.src)].push_back(
            {e.dst, static_cast<int>(e.kind) + graph::kRelationKindCount});
    }
    for (int i = 0; i < n; ++i) incoming[static_cast<size_t>(i)].push_back({i, kSelfLoopRelation});

    std::vector<Tape::Id> h(static_cast<size_t>(n));
    std::vector<Tape::Id> projected_s(static_cast<size_t>(n));
    std::vector<Tape::Id> projected_t(static_cast<size_t>(n));
    std::vector<Tape::Id> projected_v(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        h[i] = tape_.row(features, i);
        projected_s[i] = tape_.matmul(w_s, h[i]);
        projected_t[i] = tape_.matmul(w_t, h[i]);
        projected_v[i] = tape_.matmul(w_v, h[i]);
    }

    std::vector<Tape::Id> out_rows(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& msgs = incoming[static_cast<size_t>(i)];
        std::vector<Tape::Id> scores;
        scores.reserve(msgs.size());
        for (const auto& msg : msgs) {
            Tape::Id pre = tape_.add(tape_.add(projected_s[i], projected_t[msg.source]),
                                     tape_.row(rel, msg.relation));
            scores.push_back(tape_.dot(attn, tape_.leaky_relu(pre, config_.leaky_slope)));
        }
        Tape::Id alpha = tape_.softmax_row(tape_.stack(scores));
        Tape::Id acc = tape_.scalar_mul(tape_.element(alpha, 0), projected_v[msgs[0].source]);
        for (size_t k = 1; k < msgs.size(); ++k)
            acc = tape_.add(acc, tape_.scalar_mul(tape_.element(alpha, static_cast<int>(k)),
                                                  projected_v[msgs[k].source]));
        out_rows[static_cast<size_t>(i)] = tape_.tanh_op(tape_.add(acc, bias));
    }
    return tape_.stack_rows(out_rows);
}

Tape::Id ModelForward::pool_graph(Tape::Id features) {
    const Tensor& H = tape_.value(features);
    if (H.rank() != 2 || H.shape[0] < 1) throw EmptyGraph();
    const int n = H.shape[0];
    Tape::Id gate_w = param("pool.gate_w");
    Tape::Id gate_b = param("pool.gate_b");
    Tape::Id proj = param("pool.proj");

    Tape::Id acc = -1;
    for (int i = 0; i < n; ++i) {
        Tape::Id h_i = tape_.row(features, i);
        Tape::Id gate = tape_.sigmoid_op(tape_.add(tape_.dot(gate_w, h_i), gate_b));
        Tape::Id gated = tape_.scalar_mul(gate, tape_.matmul(proj, h_i));
        acc = i == 0 ? gated : tape_.add(acc, gated);
    }
    return acc;
}

Tape::Id ModelForward::encode_graph(const Vocab& vocab, const graph::ConceptGraph& g) {
    Tape::Id features = init_node_features(vocab, g);
    for (int l = 0; l < config_.gat_layers; ++l) features = gat_layer(l, g, features);
    return pool_graph(features);
}

Tape::Id ModelForward::fuse(Tape::Id h_code, Tape::Id h_graph) {
    return tape_.add(h_code, h_graph);
}

Tape::Id ModelForward::batch_loss(const Vocab& vocab, const Batch& batch, bool use_graph,
                                  std::vector<std::vector<double>>* similarities) {
    const int b = batch.size();
    if (b < 2) throw BatchTooSmall(b);

    std::vector<Tape::Id> h_query(static_cast<size_t>(b));
    std::vector<Tape::Id> h_candidate(static_cast<size_t>(b));
    for (int i = 0; i < b; ++i) {
        h_query[i] = encode_text(batch.query_ids[static_cast<size_t>(i)], TextHead::Query);
        Tape::Id h_code = encode_text(batch.code_ids[static_cast<size_t>(i)], TextHead::Code);
        // nograph mode: the graph vector is the zero vector, so fusion
        // reduces to the code vector alone.
        h_candidate[i] = use_graph
                             ? fuse(h_code, encode_graph(vocab, *batch.graphs[static_cast<size_t>(i)]))
                             : h_code;
    }

    if (similarities) similarities->assign(static_cast<size_t>(b), std::vector<double>(b, 0.0));
    const double inv_tau = 1.0 / config_.temperature;
    Tape::Id total = -1;
    for (int i = 0; i < b; ++i) {
        std::vector<Tape::Id> scaled;
        scaled.reserve(static_cast<size_t>(b));
        for (int j = 0; j < b; ++j) {
            Tape::Id sim = tape_.cosine(h_query[i], h_candidate[j]);
            if (similarities) (*similarities)[i][j] = tape_.scalar(sim);
            scaled.push_back(tape_.scale(sim, inv_tau));
        }
        Tape::Id row_loss = tape_.softmax_cross_entropy_row(tape_.stack(scaled), i);
        total = i == 0 ? row_loss : tape_.add(total, row_loss);
    }
    return tape_.scale(total, 1.0 / static_cast<double>(b));
}

ParamStore ModelForward::collect_grads() const {
    ParamStore grads;
    for (const auto& [name, id] : leaves_) grads.emplace(name, tape_.grad(id));
    return grads;
}

std::string checkpoint_to_json(const LoadedModel& model) {
    nlohmann::json doc;  // std::map keys -> name-sorted output
    doc["version"] = 1;
    doc["dims"] = {{"embed_dim", model.config.embed_dim},
                   {"gat_layers", model.config.gat_layers},
                   {"leaky_slope", model.config.leaky_slope},
                   {"temperature", model.config.temperature},
                   {"max_code_tokens", model.config.max_code_tokens},
                   {"max_query_tokens", model.config.max_query_tokens}};
    doc["vocab"] = model.vocab.tokens();
    nlohmann::json params;
    for (const auto& [name, tensor] : model.params) {
        params[name] = {{"shape", tensor.shape}, {"data", tensor.data}};
    }
    doc["params"] = std::move(params);
    return doc.dump();
}

LoadedModel checkpoint_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw VocabMismatch(std::string("invalid checkpoint JSON: ") + e.what());
    }
    if (!doc.contains("vocab") || !doc["vocab"].is_array())
        throw VocabMismatch("checkpoint is missing its vocabulary");
    LoadedModel model;
    const auto& dims = doc.at("dims");
    model.config.embed_dim = dims.at("embed_dim").get<int>();
    model.config.gat_layers = dims.at("gat_layers").get<int>();
    model.config.leaky_slope = dims.at("leaky_slope").get<double>();
    model.config.temperature = dims.at("temperature").get<double>();
    model.config.max_code_tokens = dims.at("max_code_tokens").get<int>();
    model.config.max_query_tokens = dims.at("max_query_tokens").get<int>();
    model.vocab = Vocab::from_tokens(doc["vocab"].get<std::vector<std::string>>());
    for (const auto& [name, entry] : doc.at("params").items()) {
        Tensor t(entry.at("shape").get<std::vector<int>>(),
                 entry.at("data").get<std::vector<double>>());
        size_t expected = 1;
        for (int d : t.shape) expected *= static_cast<size_t>(d);
        if (t.data.size() != expected)
            throw VocabMismatch("parameter '" + name + "' has inconsistent shape/data");
        model.params.emplace(name, std::move(t));
    }
    return model;
}

void save_checkpoint(const std::string& path, const LoadedModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw corpus::IoError("cannot open '" + path + "' for writing");
    out << checkpoint_to_json(model);
}

LoadedModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw corpus::IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_json(buf.str());
}

}  // namespace cgs::model
