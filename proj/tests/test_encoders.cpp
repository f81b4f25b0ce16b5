#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "cgs/model/model.hpp"
#include "cgs/model/vocab.hpp"
#include "cgs/nn/grad_check.hpp"
#include "cgs/syntax/parser.hpp"

using namespace cgs::model;
using cgs::nn::ParamStore;
using cgs::nn::Tape;
using cgs::nn::Tensor;

namespace {

cgs::corpus::Triplet make_triplet(const std::string& id, const std::string& code,
                                  const std::string& query) {
    cgs::corpus::Triplet t;
    t.id = id;
    t.code_text = code;
    t.query_text = query;
    t.graph = cgs::graph::extract_graph(cgs::syntax::parse_snippet(code));
    return t;
}

std::vector<cgs::corpus::Triplet> tiny_corpus() {
    return {
        make_triplet("t1", "int addNumbers(int left, int right) { return left + right; }",
                     "add two numbers and return the sum"),
        make_triplet("t2", "int subtractNumbers(int left, int right) { return left - right; }",
                     "subtract the right number from the left number"),
        make_triplet("t3", "void clearBuffer(Buffer buf) { buf.reset(); }",
                     "clear the buffer by resetting it"),
    };
}

}  // namespace

TEST_CASE("subtokenize splits camel case, underscores and digits") {
    CHECK(subtokenize("parseHttpRequest") ==
          std::vector<std::string>{"parse", "http", "request"});
    CHECK(subtokenize("MAX_SIZE2") == std::vector<std::string>{"max", "size", "2"});
    CHECK(subtokenize("snake_case") == std::vector<std::string>{"snake", "case"});
    CHECK(subtokenize("x2y") == std::vector<std::string>{"x", "2", "y"});
    CHECK(subtokenize("simple") == std::vector<std::string>{"simple"});
    CHECK(subtokenize("").empty());
    CHECK(subtokenize("__") .empty());
}

TEST_CASE("tokenize_code folds literals and drops operators") {
    CHECK(tokenize_code("int maxValue = other + 42;") ==
          std::vector<std::string>{"int", "max", "value", "other", "NUM"});
    CHECK(tokenize_code("String s = \"hello world\";") ==
          std::vector<std::string>{"string", "s", "STR"});
    CHECK(tokenize_code("boolean b = true;") ==
          std::vector<std::string>{"boolean", "b", "true"});
}

TEST_CASE("tokenize_query splits on punctuation") {
    CHECK(tokenize_query("Sorts the list, in-place.") ==
          std::vector<std::string>{"sorts", "the", "list", "in", "place"});
    CHECK(tokenize_query("").empty());
}

TEST_CASE("vocab reserves pad and unk and applies min_freq") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 2);
    REQUIRE(v.size() >= 2);
    CHECK(v.tokens()[0] == "<pad>");
    CHECK(v.tokens()[1] == "<unk>");
    // "numbers" appears in both code and query of t1 and t2 -> kept
    CHECK(v.encode("numbers") != Vocab::kUnk);
    // appears once overall -> dropped under min_freq 2
    CHECK(v.encode("resetting") == Vocab::kUnk);
    CHECK(v.encode("never-seen") == Vocab::kUnk);

    Vocab again = Vocab::build(train, 2);
    CHECK(v.tokens() == again.tokens());

    Vocab loose = Vocab::build(train, 1);
    CHECK(loose.size() > v.size());
    CHECK(loose.encode("resetting") != Vocab::kUnk);
}

TEST_CASE("vocab orders by frequency then lexicographically") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    // recount frequencies independently
    std::map<std::string, int> freq;
    for (const auto& t : train) {
        for (const auto& s : tokenize_code(t.code_text)) ++freq[s];
        for (const auto& s : tokenize_query(t.query_text)) ++freq[s];
        for (const auto& n : t.graph.nodes)
            for (const auto& s : subtokenize(n.name)) ++freq[s];
    }
    const auto& toks = v.tokens();
    for (size_t i = 3; i < toks.size(); ++i) {
        int fa = freq.at(toks[i - 1]);
        int fb = freq.at(toks[i]);
        CHECK((fa > fb || (fa == fb && toks[i - 1] < toks[i])));
    }
}

TEST_CASE("vocab rejects an empty corpus") {
    std::vector<cgs::corpus::Triplet> none;
    CHECK_THROWS_AS(Vocab::build(none, 2), EmptyCorpus);
}

TEST_CASE("encode_subtokens truncates and never returns empty") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    auto ids = encode_subtokens(v, {"numbers", "numbers", "numbers"}, 2);
    CHECK(ids.size() == 2);
    auto fallback = encode_subtokens(v, {}, 8);
    REQUIRE(fallback.size() == 1);
    CHECK(fallback[0] == Vocab::kUnk);
}

TEST_CASE("init_model_params is seeded, bounded and complete") {
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.gat_layers = 2;
    cfg.seed = 17;
    auto params = init_model_params(cfg, 20);
    CHECK(params.size() == 2 + 2 * 6 + 3 + 2 * 4);
    CHECK(params.at("embed").shape == std::vector<int>{20, 8});
    CHECK(params.at("kind").shape == std::vector<int>{5, 8});
    CHECK(params.at("gat1.rel").shape == std::vector<int>{kRelationTableRows, 8});
    CHECK(kRelationTableRows == 19);
    for (const auto& [name, t] : params)
        for (double x : t.data) CHECK(std::abs(x) <= 0.1);

    auto same = init_model_params(cfg, 20);
    CHECK(params.at("embed").data == same.at("embed").data);
    cfg.seed = 18;
    auto other = init_model_params(cfg, 20);
    CHECK(params.at("embed").data != other.at("embed").data);
}

TEST_CASE("encode_text is deterministic, order-invariant and d-dimensional") {
    ModelConfig cfg;
    cfg.embed_dim = 32;
    auto params = init_model_params(cfg, 12);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    auto a = fwd.encode_text({2, 3, 5}, TextHead::Query);
    auto b = fwd.encode_text({5, 2, 3}, TextHead::Query);
    auto c = fwd.encode_text({2, 3, 5}, TextHead::Code);
    REQUIRE(tape.value(a).shape == std::vector<int>{32});
    // mean pooling ignores order up to summation rounding
    for (int c = 0; c < 32; ++c)
        CHECK(tape.value(a).at(c) == doctest::Approx(tape.value(b).at(c)).epsilon(1e-12));
    CHECK(tape.value(a).data != tape.value(c).data);  // heads are separate
}

TEST_CASE("init_node_features keys on name and kind") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    cfg.embed_dim = 8;
    auto params = init_model_params(cfg, v.size());
    Tape tape;
    ModelForward fwd(tape, params, cfg);

    cgs::graph::ConceptGraph g;
    g.nodes = {{"buf", cgs::graph::NodeKind::MethodName},
               {"buf", cgs::graph::NodeKind::Parameter},
               {"left", cgs::graph::NodeKind::Parameter}};
    auto feats = fwd.init_node_features(v, g);
    const Tensor& H = tape.value(feats);
    REQUIRE(H.shape == std::vector<int>{3, 8});
    bool kind_differs = false, name_differs = false;
    for (int c = 0; c < 8; ++c) {
        if (H.at(0, c) != H.at(1, c)) kind_differs = true;
        if (H.at(1, c) != H.at(2, c)) name_differs = true;
    }
    CHECK(kind_differs);
    CHECK(name_differs);

    cgs::graph::ConceptGraph empty;
    CHECK_THROWS_AS(fwd.init_node_features(v, empty), EmptyGraph);
}

TEST_CASE("gat layer on a single node reduces to the self-loop message") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    cfg.embed_dim = 6;
    cfg.gat_layers = 1;
    auto params = init_model_params(cfg, v.size());

    Tape tape;
    ModelForward fwd(tape, params, cfg);
    cgs::graph::ConceptGraph g;
    g.nodes = {{"f", cgs::graph::NodeKind::MethodName}};
    auto feats = fwd.init_node_features(v, g);
    auto out = fwd.gat_layer(0, g, feats);

    // independent recomputation: alpha is 1, so out = tanh(W_v h + bias)
    Tape ref;
    auto h = ref.leaf(Tensor::vector(std::vector<double>(
        tape.value(feats).data.begin(), tape.value(feats).data.begin() + 6)));
    auto w_v = ref.leaf(params.at("gat0.w_v"));
    auto bias = ref.leaf(params.at("gat0.bias"));
    auto expect = ref.tanh_op(ref.add(ref.matmul(w_v, h), bias));
    for (int c = 0; c < 6; ++c)
        CHECK(tape.value(out).at(0, c) == doctest::Approx(ref.value(expect).at(c)));
}

TEST_CASE("pool_graph single row matches the gate formula") {
    ModelConfig cfg;
    cfg.embed_dim = 4;
    auto params = init_model_params(cfg, 6);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    Tensor row({1, 4}, {0.3, -0.8, 0.5, 0.1});
    auto pooled = fwd.pool_graph(tape.leaf(row));

    const Tensor& gw = params.at("pool.gate_w");
    double z = params.at("pool.gate_b").at(0);
    for (int c = 0; c < 4; ++c) z += gw.at(c) * row.at(0, c);
    double gate = 1.0 / (1.0 + std::exp(-z));
    const Tensor& proj = params.at("pool.proj");
    for (int c = 0; c < 4; ++c) {
        double projected = 0.0;
        for (int j = 0; j < 4; ++j) projected += proj.at(c, j) * row.at(0, j);
        CHECK(tape.value(pooled).at(c) == doctest::Approx(gate * projected));
    }
}

TEST_CASE("pool_graph is invariant to node order") {
    ModelConfig cfg;
    cfg.embed_dim = 4;
    auto params = init_model_params(cfg, 6);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    Tensor ab({2, 4}, {0.3, -0.8, 0.5, 0.1, -0.2, 0.9, 0.4, -0.6});
    Tensor ba({2, 4}, {-0.2, 0.9, 0.4, -0.6, 0.3, -0.8, 0.5, 0.1});
    auto p1 = fwd.pool_graph(tape.leaf(ab));
    auto p2 = fwd.pool_graph(tape.leaf(ba));
    for (int c = 0; c < 4; ++c)
        CHECK(std::abs(tape.value(p1).at(c) - tape.value(p2).at(c)) < 1e-9);
}

TEST_CASE("fuse is elementwise sum") {
    ModelConfig cfg;
    cfg.embed_dim = 2;
    auto params = init_model_params(cfg, 4);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    auto code = tape.leaf(Tensor::vector({1.0, 1.0}));
    auto graph = tape.leaf(Tensor::vector({2.0, 3.0}));
    auto zero = tape.leaf(Tensor::vector({0.0, 0.0}));
    auto fused = fwd.fuse(code, graph);
    CHECK(tape.value(fused).data == std::vector<double>{3.0, 4.0});
    CHECK(tape.value(fwd.fuse(code, zero)).data == tape.value(code).data);
    CHECK(tape.value(fwd.fuse(graph, code)).data == tape.value(fused).data);
}

TEST_CASE("batch_loss of identical pairs is ln B") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.gat_layers = 1;
    auto params = init_model_params(cfg, v.size());

    std::vector<const cgs::corpus::Triplet*> same = {&train[0], &train[0], &train[0]};
    Batch batch = make_batch(cfg, v, same);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    std::vector<std::vector<double>> sims;
    auto loss = fwd.batch_loss(v, batch, true, &sims);
    CHECK(tape.scalar(loss) == doctest::Approx(std::log(3.0)));
    // identical items give a constant similarity matrix
    for (const auto& row : sims)
        for (double s : row) CHECK(s == doctest::Approx(sims[0][0]));
}

TEST_CASE("batch_loss similarities are cosines in range") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    cfg.embed_dim = 8;
    cfg.gat_layers = 1;
    auto params = init_model_params(cfg, v.size());
    std::vector<const cgs::corpus::Triplet*> ptrs = {&train[0], &train[1], &train[2]};
    Batch batch = make_batch(cfg, v, ptrs);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    std::vector<std::vector<double>> sims;
    auto loss = fwd.batch_loss(v, batch, false, &sims);
    CHECK(tape.scalar(loss) > 0.0);
    REQUIRE(sims.size() == 3);
    for (const auto& row : sims)
        for (double s : row) CHECK(std::abs(s) <= 1.0 + 1e-12);
}

TEST_CASE("batch_loss rejects batches below two") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    auto params = init_model_params(cfg, v.size());
    std::vector<const cgs::corpus::Triplet*> one = {&train[0]};
    Batch batch = make_batch(cfg, v, one);
    Tape tape;
    ModelForward fwd(tape, params, cfg);
    CHECK_THROWS_AS(fwd.batch_loss(v, batch, true), BatchTooSmall);
}

TEST_CASE("full model gradients pass the finite-difference check") {
    auto train = tiny_corpus();
    Vocab v = Vocab::build(train, 1);
    ModelConfig cfg;
    cfg.embed_dim = 6;
    cfg.gat_layers = 1;
    cfg.seed = 3;
    ParamStore params = init_model_params(cfg, v.size());

    std::vector<const cgs::corpus::Triplet*> ptrs = {&train[0], &train[1], &train[2]};
    Batch batch = make_batch(cfg, v, ptrs);

    cgs::nn::LossFn fn = [&](const ParamStore& p, ParamStore* grads) {
        Tape tape;
        ModelForward fwd(tape, p, cfg);
        auto loss = fwd.batch_loss(v, batch, true);
        if (grads) {
            tape.backward(loss);
            *grads = fwd.collect_grads();
        }
        return tape.scalar(loss);
    };
    CHECK(cgs::nn::grad_check(fn, params) < 1e-4);
}

TEST_CASE("checkpoints round-trip byte-deterministically") {
    auto train = tiny_corpus();
    LoadedModel model;
    model.config.embed_dim = 8;
    model.config.gat_layers = 1;
    model.vocab = Vocab::build(train, 1);
    model.params = init_model_params(model.config, model.vocab.size());

    std::string bytes = checkpoint_to_json(model);
    CHECK(bytes == checkpoint_to_json(model));
    LoadedModel back = checkpoint_from_json(bytes);
    CHECK(back.config.embed_dim == 8);
    CHECK(back.vocab.tokens() == model.vocab.tokens());
    REQUIRE(back.params.size() == model.params.size());
    for (const auto& [name, t] : model.params) {
        CHECK(back.params.at(name).shape == t.shape);
        CHECK(back.params.at(name).data == t.data);
    }
    CHECK(checkpoint_to_json(back) == bytes);

    save_checkpoint("ckpt_roundtrip.json", model);
    LoadedModel loaded = load_checkpoint("ckpt_roundtrip.json");
    CHECK(checkpoint_to_json(loaded) == bytes);
}

TEST_CASE("checkpoint loader rejects malformed documents") {
    CHECK_THROWS_AS(checkpoint_from_json("not json"), VocabMismatch);
    CHECK_THROWS_AS(checkpoint_from_json("{\"version\":1}"), VocabMismatch);
}
