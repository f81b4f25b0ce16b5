#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgs/model/model.hpp"
#include "cgs/search/search.hpp"

namespace cgs::search {

class EmptySplit : public std::runtime_error {
public:
    explicit EmptySplit(const std::string& which)
        : std::runtime_error("split '" + which + "' is empty") {}
};

struct TrainConfig {
    int epochs = 10;
    int batch_size = 16;
    double learning_rate = 1e-3;
    uint64_t seed = 0;
    bool use_graph = true;  // false trains with graph vectors zeroed
    int min_freq = 2;
    int eval_pool_size = 1000;
    model::ModelConfig model;

    std::string train_path;
    std::string valid_path;
    std::string checkpoint_path;       // final epoch
    std::string best_checkpoint_path;  // best validation MRR
    std::string metrics_path;
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double valid_mrr = 0.0;
};

struct TrainResult {
    model::LoadedModel final_model;
    model::LoadedModel best_model;
    int best_epoch = 0;
    std::vector<EpochMetrics> metrics;
};

// Seeded init; per epoch: deterministic shuffle, fixed batches (short tail
// batches below 2 are dropped), forward/backward/optimizer step; validation
// MRR per epoch selects the best checkpoint.
TrainResult train(const TrainConfig& config, const std::vector<corpus::Triplet>& train_split,
                  const std::vector<corpus::Triplet>& valid_split);

TrainConfig train_config_from_json(const std::string& text);
std::string metrics_to_jsonl(const std::vector<EpochMetrics>& metrics);

}  // namespace cgs::search
