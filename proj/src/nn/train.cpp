#include "evopatch/nn/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "evopatch/error.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::nn {

namespace {

template <typename T>
void check_set(const SampleSet<T>& set, const Model<T>& model, const char* name) {
    if (set.count() == 0) {
        throw ValidationError(std::string("train: empty ") + name + " set");
    }
    if (set.features != model.input_shape().features()) {
        std::ostringstream msg;
        msg << "train: " << name << " set has " << set.features << " features, model expects "
            << model.input_shape().features();
        throw DimensionError(msg.str());
    }
    if (set.x.size() != static_cast<size_t>(set.count()) * set.features) {
        throw DimensionError(std::string("train: ") + name + " set data length mismatch");
    }
    for (int label : set.y) {
        if (label < 0 || label >= model.num_classes()) {
            throw ValidationError(std::string("train: ") + name + " label out of range");
        }
    }
}

} // namespace

template <typename T>
double mean_nll(const std::vector<T>& probs, const std::vector<int>& labels, int num_classes) {
    double total = 0.0;
    for (size_t b = 0; b < labels.size(); ++b) {
        total -= std::log(
            static_cast<double>(probs[b * static_cast<size_t>(num_classes) + labels[b]]));
    }
    return total / static_cast<double>(labels.size());
}

template <typename T>
TrainResult train(Model<T>& model, const SampleSet<T>& train_set, const SampleSet<T>& val_set,
                  const TrainConfig& cfg, std::uint64_t seed) {
    if (cfg.epochs < 1 || cfg.batch_size < 1) {
        throw ValidationError("train: epochs and batch_size must be >= 1");
    }
    check_set(train_set, model, "train");
    check_set(val_set, model, "validation");

    const auto n = train_set.count();
    const auto features = train_set.features;
    Rng rng(seed);
    std::vector<std::int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    TrainResult result;
    std::vector<T> batch_x;
    std::vector<int> batch_y;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double nll_sum = 0.0;
        for (std::int64_t start = 0; start < n; start += cfg.batch_size) {
            const int bsz = static_cast<int>(std::min<std::int64_t>(cfg.batch_size, n - start));
            batch_x.resize(static_cast<size_t>(bsz) * features);
            batch_y.resize(static_cast<size_t>(bsz));
            for (int j = 0; j < bsz; ++j) {
                const auto src = order[static_cast<size_t>(start + j)];
                std::copy_n(train_set.x.begin() + src * features, features,
                            batch_x.begin() + static_cast<std::int64_t>(j) * features);
                batch_y[static_cast<size_t>(j)] = train_set.y[static_cast<size_t>(src)];
            }
            const auto& probs = model.forward(batch_x, bsz, true, &rng);
            nll_sum += mean_nll(probs, batch_y, model.num_classes()) * bsz;
            model.zero_grads();
            model.backward(batch_y);
            model.adam_update(cfg.adam);
        }
        const double epoch_loss = nll_sum / static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) {
            std::ostringstream msg;
            msg << "train: non-finite loss in epoch " << epoch;
            throw TrainingDiverged(msg.str());
        }
        result.epoch_losses.push_back(epoch_loss);
    }
    result.val_accuracy = evaluate_accuracy(model, val_set);
    return result;
}

template <typename T>
double evaluate_accuracy(Model<T>& model, const SampleSet<T>& set, int eval_batch) {
    check_set(set, model, "evaluation");
    if (eval_batch < 1) {
        throw ValidationError("evaluate_accuracy: eval_batch must be >= 1");
    }
    const auto n = set.count();
    const auto features = set.features;
    const int c = model.num_classes();
    std::int64_t correct = 0;
    std::vector<T> batch_x;
    for (std::int64_t start = 0; start < n; start += eval_batch) {
        const int bsz = static_cast<int>(std::min<std::int64_t>(eval_batch, n - start));
        batch_x.assign(set.x.begin() + start * features,
                       set.x.begin() + (start + bsz) * features);
        const auto& probs = model.forward(batch_x, bsz, false, nullptr);
        for (int j = 0; j < bsz; ++j) {
            const T* row = probs.data() + static_cast<size_t>(j) * c;
            int best = 0;
            for (int k = 1; k < c; ++k) {
                if (row[k] > row[best]) best = k;
            }
            if (best == set.y[static_cast<size_t>(start + j)]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

#define EVOPATCH_INSTANTIATE_TRAIN(T)                                                      \
    template TrainResult train<T>(Model<T>&, const SampleSet<T>&, const SampleSet<T>&,     \
                                  const TrainConfig&, std::uint64_t);                      \
    template double evaluate_accuracy<T>(Model<T>&, const SampleSet<T>&, int);             \
    template double mean_nll<T>(const std::vector<T>&, const std::vector<int>&, int);

EVOPATCH_INSTANTIATE_TRAIN(float)
EVOPATCH_INSTANTIATE_TRAIN(double)

#undef EVOPATCH_INSTANTIATE_TRAIN

} // namespace evopatch::nn
