#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgs/model/model.hpp"

namespace cgs::search {

class EmptyIndex : public std::runtime_error {
public:
    EmptyIndex() : std::runtime_error("search index is empty") {}
};

class EmptyTestSet : public std::runtime_error {
public:
    EmptyTestSet() : std::runtime_error("test set is empty") {}
};

// Immutable candidate vectors with identifiers, in input order.
struct SearchIndex {
    std::vector<std::string> ids;
    std::vector<nn::Tensor> vectors;
    bool use_graph = true;

    int size() const { return static_cast<int>(ids.size()); }
};

struct EvalResult {
    double mrr = 0.0;
    int pool_size = 0;
    uint64_t seed = 0;
    bool use_graph = true;
    std::vector<double> reciprocal_ranks;
};

// One candidate vector per triplet: fuse(code, pooled graph) when use_graph,
// else the code-head vector alone.
SearchIndex embed_candidates(const model::LoadedModel& model,
                             const std::vector<corpus::Triplet>& triplets, bool use_graph);

nn::Tensor embed_query(const model::LoadedModel& model, const std::string& query_text);

// Candidate positions by cosine similarity descending; ties broken by input
// position ascending.
std::vector<int> rank(const SearchIndex& index, const nn::Tensor& query_vector);

// Pool protocol: each query's own candidate plus up to pool_size-1 seeded
// distractors drawn without replacement from the other test candidates.
EvalResult evaluate_mrr(const model::LoadedModel& model,
                        const std::vector<corpus::Triplet>& test, int pool_size, uint64_t seed,
                        bool use_graph);

std::string eval_result_to_json(const EvalResult& result);

}  // namespace cgs::search
