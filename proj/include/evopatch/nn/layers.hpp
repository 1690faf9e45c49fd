#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace evopatch::nn {

// Declarative layer descriptions; the model instantiates weights from them
// and the binary model container serializes them.
struct Conv2dSpec {
    int kernel_h = 3;
    int kernel_w = 3;
    int out_channels = 0;
    bool operator==(const Conv2dSpec&) const = default;
};
struct MaxPool2dSpec {
    int window = 2; // stride equals window
    bool operator==(const MaxPool2dSpec&) const = default;
};
struct ReluSpec {
    bool operator==(const ReluSpec&) const = default;
};
struct DropoutSpec {
    double rate = 0.0;
    bool operator==(const DropoutSpec&) const = default;
};
struct FlattenSpec {
    bool operator==(const FlattenSpec&) const = default;
};
struct DenseSpec {
    int units = 0;
    bool operator==(const DenseSpec&) const = default;
};
struct SoftmaxSpec {
    bool operator==(const SoftmaxSpec&) const = default;
};

using LayerSpec =
    std::variant<Conv2dSpec, MaxPool2dSpec, ReluSpec, DropoutSpec, FlattenSpec, DenseSpec,
                 SoftmaxSpec>;

// Per-sample activation shape between layers.
struct Shape3 {
    int height = 0;
    int width = 0;
    int channels = 0;
    bool operator==(const Shape3&) const = default;
    int64_t features() const { return static_cast<int64_t>(height) * width * channels; }
};

// Output shape of every layer in order. Throws DimensionError when a conv or
// pool stage would shrink the map below 1x1, or a spec is inconsistent.
std::vector<Shape3> infer_shapes(const std::vector<LayerSpec>& specs, Shape3 input);

// Trainable parameters: conv (kh*kw*in + 1)*out, dense (in + 1)*units; other
// layers contribute nothing. Architecture arithmetic only, no weights needed.
int64_t count_parameters(const std::vector<LayerSpec>& specs, Shape3 input);

// Width/depth knobs for the stock architecture. The conv/dense sizes are
// config-overridable defaults, not data-derived.
struct ModelConfig {
    std::vector<int> conv_filters{16, 32, 64};
    int kernel = 3;
    int pool = 2;
    double conv_dropout = 0.25;
    int dense_units = 128;
    double dense_dropout = 0.5;
};

// conv-relu-pool-drop blocks, then dense-relu-drop, then dense(C)-softmax.
std::vector<LayerSpec> default_cnn_layers(const ModelConfig& cfg, int num_classes);

// Multinomial logistic regression on flattened input; the fast proxy
// classifier: flatten, dense(C), softmax.
std::vector<LayerSpec> logreg_layers(int num_classes);

} // namespace evopatch::nn
