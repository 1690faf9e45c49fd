#pragma once

#include <cstdint>
#include <vector>

#include "evopatch/nn/adam.hpp"
#include "evopatch/nn/model.hpp"

namespace evopatch::nn {

// Flat sample-major dataset: x holds count() * features values.
template <typename T>
struct SampleSet {
    std::vector<T> x;
    std::vector<int> y;
    std::int64_t features = 0;

    std::int64_t count() const { return static_cast<std::int64_t>(y.size()); }
};

struct TrainConfig {
    int epochs = 10;
    int batch_size = 8;
    AdamConfig adam;
};

struct TrainResult {
    double val_accuracy = 0.0;         // final-epoch accuracy on the validation set
    std::vector<double> epoch_losses;  // mean training cross-entropy per epoch
};

// Minibatch Adam on softmax cross-entropy. Shuffling, dropout, and weight
// init (already in the model) are all seeded, so the result is bitwise
// reproducible. Throws TrainingDiverged when the loss leaves the finite
// range, ValidationError on empty or mismatched sets.
template <typename T>
TrainResult train(Model<T>& model, const SampleSet<T>& train_set, const SampleSet<T>& val_set,
                  const TrainConfig& cfg, std::uint64_t seed);

// Fraction of samples whose argmax matches the label; ties take the first
// maximal class.
template <typename T>
double evaluate_accuracy(Model<T>& model, const SampleSet<T>& set, int eval_batch = 64);

// Mean negative log-likelihood of a probability batch under integer labels.
template <typename T>
double mean_nll(const std::vector<T>& probs, const std::vector<int>& labels, int num_classes);

} // namespace evopatch::nn
