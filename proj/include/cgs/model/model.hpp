#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgs/corpus/corpus.hpp"
#include "cgs/model/vocab.hpp"
#include "cgs/nn/tape.hpp"

namespace cgs::model {

class BatchTooSmall : public std::runtime_error {
public:
    explicit BatchTooSmall(int size)
        : std::runtime_error("contrastive batch needs at least 2 items, got " +
                             std::to_string(size)) {}
};

class EmptyGraph : public std::runtime_error {
public:
    EmptyGraph() : std::runtime_error("cannot pool an empty graph") {}
};

class VocabMismatch : public std::runtime_error {
public:
    explicit VocabMismatch(const std::string& message)
        : std::runtime_error("vocab mismatch: " + message) {}
};

struct ModelConfig {
    int embed_dim = 32;
    int gat_layers = 2;
    double leaky_slope = 0.2;
    double temperature = 0.07;
    int max_code_tokens = 128;
    int max_query_tokens = 32;
    uint64_t seed = 0;
};

// Relation vocabulary of the message passing: 9 forward kinds, 9 inverse
// kinds, 1 self-loop kind.
inline constexpr int kRelationTableRows = 2 * graph::kRelationKindCount + 1;
inline constexpr int kSelfLoopRelation = 2 * graph::kRelationKindCount;

enum class TextHead { Query, Code };

// Seeded uniform init in [-0.1, 0.1] for every learnable tensor.
nn::ParamStore init_model_params(const ModelConfig& config, int vocab_size);

struct Batch {
    std::vector<std::vector<int>> query_ids;
    std::vector<std::vector<int>> code_ids;
    std::vector<const graph::ConceptGraph*> graphs;

    int size() const { return static_cast<int>(query_ids.size()); }
};

Batch make_batch(const ModelConfig& config, const Vocab& vocab,
                 const std::vector<const corpus::Triplet*>& triplets);

// One forward pass over a tape: all parameters become leaves once, model
// pieces compose tape nodes on top of them.
class ModelForward {
public:
    ModelForward(nn::Tape& tape, const nn::ParamStore& params, const ModelConfig& config);

    nn::Tape::Id encode_text(const std::vector<int>& subtoken_ids, TextHead head);
    nn::Tape::Id init_node_features(const Vocab& vocab, const graph::ConceptGraph& g);
    nn::Tape::Id gat_layer(int layer, const graph::ConceptGraph& g, nn::Tape::Id features);
    nn::Tape::Id pool_graph(nn::Tape::Id features);
    nn::Tape::Id encode_graph(const Vocab& vocab, const graph::ConceptGraph& g);
    nn::Tape::Id fuse(nn::Tape::Id h_code, nn::Tape::Id h_graph);

    // Mean in-batch-negatives cross entropy. When `similarities` is non-null
    // it receives the unscaled cosine matrix S[i][j].
    nn::Tape::Id batch_loss(const Vocab& vocab, const Batch& batch, bool use_graph,
                            std::vector<std::vector<double>>* similarities = nullptr);

    // Copy d(loss)/d(param) out of the tape after backward().
    nn::ParamStore collect_grads() const;

    nn::Tape::Id param(const std::string& name) const;

private:
    nn::Tape& tape_;
    const ModelConfig& config_;
    std::map<std::string, nn::Tape::Id> leaves_;
};

// A trained model bundle.
struct LoadedModel {
    ModelConfig config;
    Vocab vocab;
    nn::ParamStore params;
};

// Checkpoint: single JSON document with name-sorted keys; byte-deterministic.
std::string checkpoint_to_json(const LoadedModel& model);
LoadedModel checkpoint_from_json(const std::string& text);
void save_checkpoint(const std::string& path, const LoadedModel& model);
LoadedModel load_checkpoint(const std::string& path);

}  // namespace cgs::model
