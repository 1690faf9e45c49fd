#pragma once

#include <cstdint>
#include <vector>

#include "evopatch/nn/adam.hpp"
#include "evopatch/nn/layers.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::nn {

// A feedforward net instantiated from layer specs. The last layer must be
// softmax; backward fuses it with cross-entropy, so gradients start from
// (p - y) / batch at the logits.
//
// Weight init is seeded and drawn in layer order: He-uniform for conv and
// hidden dense layers, Glorot-uniform for the final dense. Dropout masks are
// drawn serially in element order from the rng passed to forward, so a whole
// training run is reproducible from (seed, data order, config).
//
// T = float for runs, double for finite-difference gradient checks.
template <typename T>
class Model {
public:
    Model(Shape3 input, std::vector<LayerSpec> specs, std::uint64_t seed);

    // x holds batch * input.features() values, NHWC. Returns per-row class
    // probabilities (batch * num_classes). training=true applies inverted
    // dropout and requires rng when any dropout layer is present.
    const std::vector<T>& forward(const std::vector<T>& x, int batch, bool training,
                                  Rng* rng = nullptr);

    // Accumulates cross-entropy gradients into the grad buffers using the
    // activations cached by the last forward call.
    void backward(const std::vector<int>& labels);

    void zero_grads();
    void adam_update(const AdamConfig& cfg);

    std::int64_t parameter_count() const { return param_count_; }
    int num_classes() const { return num_classes_; }
    const Shape3& input_shape() const { return input_; }
    const std::vector<LayerSpec>& specs() const { return specs_; }

    // Flat scalar view over all trainable parameters, layer order, weights
    // before bias. Used by the gradient checker and the model container.
    T param_at(std::int64_t i) const;
    void set_param_at(std::int64_t i, T value);
    T grad_at(std::int64_t i) const;

    std::size_t layer_count() const { return specs_.size(); }
    std::vector<T>& layer_weights(std::size_t layer) { return states_[layer].w; }
    const std::vector<T>& layer_weights(std::size_t layer) const { return states_[layer].w; }
    std::vector<T>& layer_bias(std::size_t layer) { return states_[layer].b; }
    const std::vector<T>& layer_bias(std::size_t layer) const { return states_[layer].b; }

private:
    struct LayerState {
        std::vector<T> w, b;         // weights and bias (empty when layer has none)
        std::vector<T> dw, db;       // gradient accumulators
        std::vector<T> mw, vw, mb, vb; // Adam moments
    };

    std::vector<T>& locate(std::int64_t i, std::int64_t& offset, bool grads);

    Shape3 input_;
    std::vector<LayerSpec> specs_;
    std::vector<Shape3> shapes_; // output shape of each layer
    std::vector<LayerState> states_;
    std::int64_t param_count_ = 0;
    int num_classes_ = 0;
    bool has_dropout_ = false;
    long step_ = 0;

    // Forward caches: acts_[i] is the input of layer i, acts_.back() the
    // final probabilities. pool_argmax_ / drop_mask_ are per-layer.
    std::vector<std::vector<T>> acts_;
    std::vector<std::vector<int>> pool_argmax_;
    std::vector<std::vector<T>> drop_mask_;
    int batch_ = 0;
    bool forward_training_ = false;
};

} // namespace evopatch::nn
