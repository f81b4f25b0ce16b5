#include "cgs/search/train.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "cgs/nn/optim.hpp"
#include "cgs/util/rng.hpp"

namespace cgs::search {

using model::LoadedModel;
using model::ModelForward;
using nn::Tape;

TrainResult train(const TrainConfig& config, const std::vector<corpus::Triplet>& train_split,
                  const std::vector<corpus::Triplet>& valid_split) {
    if (train_split.empty()) throw EmptySplit("train");

    LoadedModel current;
    current.config = config.model;
    current.config.seed = config.seed;
    current.vocab = model::Vocab::build(train_split, config.min_freq);
    current.params = model::init_model_params(current.config, current.vocab.size());

    nn::OptimizerState optimizer;
    optimizer.learning_rate = config.learning_rate;

    util::Rng shuffle_rng(util::mix_seed(config.seed, 0x7261696eULL));

    TrainResult result;
    double best_mrr = -1.0;

    std::vector<size_t> order(train_split.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        int batch_count = 0;
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
            size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
            if (end - start < 2) continue;  // contrastive loss needs negatives

            std::vector<const corpus::Triplet*> items;
            for (size_t k = start; k < end; ++k) items.push_back(&train_split[order[k]]);

            Tape tape;
            ModelForward fwd(tape, current.params, current.config);
            model::Batch batch = model::make_batch(current.config, current.vocab, items);
            Tape::Id loss = fwd.batch_loss(current.vocab, batch, config.use_graph);
            tape.backward(loss);
            nn::adam_step(current.params, fwd.collect_grads(), optimizer);

            loss_sum += tape.scalar(loss);
            ++batch_count;
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = batch_count > 0 ? loss_sum / batch_count : 0.0;
        if (!valid_split.empty()) {
            int pool = std::min<int>(config.eval_pool_size, static_cast<int>(valid_split.size()));
            m.valid_mrr =
                evaluate_mrr(current, valid_split, pool, config.seed, config.use_graph).mrr;
        }
        result.metrics.push_back(m);

        if (m.valid_mrr >= best_mrr || valid_split.empty()) {
            // ties go to the later epoch (more training at equal MRR)
            best_mrr = m.valid_mrr;
            result.best_model = current;
            result.best_epoch = epoch;
        }
    }

    result.final_model = current;
    if (!config.checkpoint_path.empty()) model::save_checkpoint(config.checkpoint_path, result.final_model);
    if (!config.best_checkpoint_path.empty())
        model::save_checkpoint(config.best_checkpoint_path, result.best_model);
    if (!config.metrics_path.empty()) {
        std::ofstream out(config.metrics_path, std::ios::binary);
        if (!out) throw corpus::IoError("cannot open '" + config.metrics_path + "' for writing");
        out << metrics_to_jsonl(result.metrics);
    }
    return result;
}

TrainConfig train_config_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    TrainConfig cfg;
    auto get = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = doc[key].get<std::decay_t<decltype(field)>>();
    };
    get("epochs", cfg.epochs);
    get("batch_size", cfg.batch_size);
    get("learning_rate", cfg.learning_rate);
    get("seed", cfg.seed);
    get("use_graph", cfg.use_graph);
    get("min_freq", cfg.min_freq);
    get("eval_pool_size", cfg.eval_pool_size);
    get("train_path", cfg.train_path);
    get("valid_path", cfg.valid_path);
    get("checkpoint_path", cfg.checkpoint_path);
    get("best_checkpoint_path", cfg.best_checkpoint_path);
    get("metrics_path", cfg.metrics_path);
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        auto getm = [&](const char* key, auto& field) {
            if (m.contains(key)) field = m[key].get<std::decay_t<decltype(field)>>();
        };
        getm("embed_dim", cfg.model.embed_dim);
        getm("gat_layers", cfg.model.gat_layers);
        getm("leaky_slope", cfg.model.leaky_slope);
        getm("temperature", cfg.model.temperature);
        getm("max_code_tokens", cfg.model.max_code_tokens);
        getm("max_query_tokens", cfg.model.max_query_tokens);
    }
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 2) throw std::invalid_argument("batch_size must be >= 2");
    return cfg;
}

std::string metrics_to_jsonl(const std::vector<EpochMetrics>& metrics) {
    std::string out;
    for (const auto& m : metrics) {
        nlohmann::ordered_json doc;
        doc["epoch"] = m.epoch;
        doc["train_loss"] = m.train_loss;
        doc["valid_mrr"] = m.valid_mrr;
        out += doc.dump();
        out += "\n";
    }
    return out;
}

}  // namespace cgs::search
