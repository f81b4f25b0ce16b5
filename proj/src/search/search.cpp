#include "cgs/search/search.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cgs/util/rng.hpp"

namespace cgs::search {

using model::LoadedModel;
using model::ModelForward;
using model::TextHead;
using nn::Tape;
using nn::Tensor;

SearchIndex embed_candidates(const LoadedModel& model,
                             const std::vector<corpus::Triplet>& triplets, bool use_graph) {
    SearchIndex index;
    index.use_graph = use_graph;
    for (const auto& t : triplets) {
        Tape tape;
        ModelForward fwd(tape, model.params, model.config);
        std::vector<int> code_ids = model::encode_subtokens(
            model.vocab, model::tokenize_code(t.code_text), model.config.max_code_tokens);
        Tape::Id h = fwd.encode_text(code_ids, TextHead::Code);
        if (use_graph) h = fwd.fuse(h, fwd.encode_graph(model.vocab, t.graph));
        index.ids.push_back(t.id);
        index.vectors.push_back(tape.value(h));
    }
    return index;
}

Tensor embed_query(const LoadedModel& model, const std::string& query_text) {
    Tape tape;
    ModelForward fwd(tape, model.params, model.config);
    std::vector<int> ids = model::encode_subtokens(
        model.vocab, model::tokenize_query(query_text), model.config.max_query_tokens);
    return tape.value(fwd.encode_text(ids, TextHead::Query));
}

std::vector<int> rank(const SearchIndex& index, const Tensor& query_vector) {
    if (index.size() == 0) throw EmptyIndex();
    std::vector<double> scores(static_cast<size_t>(index.size()));
    for (int i = 0; i < index.size(); ++i)
        scores[static_cast<size_t>(i)] =
            nn::cosine_or_floor(query_vector, index.vectors[static_cast<size_t>(i)]);
    std::vector<int> order(static_cast<size_t>(index.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores[static_cast<size_t>(a)] > scores[static_cast<size_t>(b)];
    });
    return order;
}

EvalResult evaluate_mrr(const LoadedModel& model, const std::vector<corpus::Triplet>& test,
                        int pool_size, uint64_t seed, bool use_graph) {
    if (test.empty()) throw EmptyTestSet();
    const int n = static_cast<int>(test.size());

    SearchIndex all = embed_candidates(model, test, use_graph);

    // Distractor sampling is keyed by candidate id, not storage position, so
    // pools are stable under reordering of the test file.
    std::vector<int> by_id(static_cast<size_t>(n));
    std::iota(by_id.begin(), by_id.end(), 0);
    std::sort(by_id.begin(), by_id.end(),
              [&](int a, int b) { return all.ids[static_cast<size_t>(a)] < all.ids[static_cast<size_t>(b)]; });

    EvalResult result;
    result.pool_size = pool_size;
    result.seed = seed;
    result.use_graph = use_graph;

    for (int i = 0; i < n; ++i) {
        Tensor query_vec = embed_query(model, test[static_cast<size_t>(i)].query_text);

        std::vector<int> others;
        others.reserve(static_cast<size_t>(n) - 1);
        for (int pos : by_id)
            if (pos != i) others.push_back(pos);

        const int distractors = std::min(pool_size - 1, n - 1);
        uint64_t id_hash = 1469598103934665603ULL;
        for (char c : all.ids[static_cast<size_t>(i)])
            id_hash = (id_hash ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
        util::Rng rng(util::mix_seed(seed, id_hash));
        // Partial Fisher-Yates: the first `distractors` entries are a sample
        // without replacement.
        for (int k = 0; k < distractors; ++k) {
            size_t j = static_cast<size_t>(k) +
                       static_cast<size_t>(rng.next_below(others.size() - static_cast<size_t>(k)));
            std::swap(others[static_cast<size_t>(k)], others[j]);
        }

        SearchIndex pool;
        pool.use_graph = use_graph;
        pool.ids.push_back(all.ids[static_cast<size_t>(i)]);
        pool.vectors.push_back(all.vectors[static_cast<size_t>(i)]);
        for (int k = 0; k < distractors; ++k) {
            int pos = others[static_cast<size_t>(k)];
            pool.ids.push_back(all.ids[static_cast<size_t>(pos)]);
            pool.vectors.push_back(all.vectors[static_cast<size_t>(pos)]);
        }

        std::vector<int> order = rank(pool, query_vec);
        int gold_rank = 0;
        for (size_t r = 0; r < order.size(); ++r) {
            if (order[r] == 0) {
                gold_rank = static_cast<int>(r) + 1;
                break;
            }
        }
        result.reciprocal_ranks.push_back(1.0 / static_cast<double>(gold_rank));
    }

    double sum = 0.0;
    for (double rr : result.reciprocal_ranks) sum += rr;
    result.mrr = sum / static_cast<double>(result.reciprocal_ranks.size());
    return result;
}

std::string eval_result_to_json(const EvalResult& result) {
    nlohmann::ordered_json doc;
    doc["mrr"] = result.mrr;
    doc["pool_size"] = result.pool_size;
    doc["seed"] = result.seed;
    doc["use_graph"] = result.use_graph;
    doc["reciprocal_ranks"] = result.reciprocal_ranks;
    return doc.dump();
}

}  // namespace cgs::search
