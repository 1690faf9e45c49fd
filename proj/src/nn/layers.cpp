#include "evopatch/nn/layers.hpp"

#include <sstream>

#include "evopatch/error.hpp"

namespace evopatch::nn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::vector<Shape3> infer_shapes(const std::vector<LayerSpec>& specs, Shape3 input) {
    if (input.height < 1 || input.width < 1 || input.channels < 1) {
        throw DimensionError("infer_shapes: input shape must be positive");
    }
    std::vector<Shape3> out;
    out.reserve(specs.size());
    Shape3 cur = input;
    for (size_t i = 0; i < specs.size(); ++i) {
        std::visit(
            overloaded{
                [&](const Conv2dSpec& s) {
                    if (s.kernel_h < 1 || s.kernel_w < 1 || s.out_channels < 1) {
                        throw DimensionError("conv2d: invalid kernel spec");
                    }
                    const int oh = cur.height - s.kernel_h + 1;
                    const int ow = cur.width - s.kernel_w + 1;
                    if (oh < 1 || ow < 1) {
                        std::ostringstream msg;
                        msg << "conv2d at layer " << i << ": " << s.kernel_h << "x" << s.kernel_w
                            << " kernel does not fit " << cur.height << "x" << cur.width
                            << " feature map";
                        throw DimensionError(msg.str());
                    }
                    cur = {oh, ow, s.out_channels};
                },
                [&](const MaxPool2dSpec& s) {
                    if (s.window < 1) {
                        throw DimensionError("maxpool2d: window must be >= 1");
                    }
                    const int oh = cur.height / s.window;
                    const int ow = cur.width / s.window;
                    if (oh < 1 || ow < 1) {
                        std::ostringstream msg;
                        msg << "maxpool2d at layer " << i << ": window " << s.window
                            << " collapses " << cur.height << "x" << cur.width << " feature map";
                        throw DimensionError(msg.str());
                    }
                    cur = {oh, ow, cur.channels};
                },
                [&](const ReluSpec&) {},
                [&](const DropoutSpec& s) {
                    if (s.rate < 0.0 || s.rate >= 1.0) {
                        throw DimensionError("dropout: rate must be in [0, 1)");
                    }
                },
                [&](const FlattenSpec&) {
                    cur = {1, 1, static_cast<int>(cur.features())};
                },
                [&](const DenseSpec& s) {
                    if (s.units < 1) {
                        throw DimensionError("dense: units must be >= 1");
                    }
                    if (cur.height != 1 || cur.width != 1) {
                        throw DimensionError("dense: input must be flattened first");
                    }
                    cur = {1, 1, s.units};
                },
                [&](const SoftmaxSpec&) {
                    if (cur.height != 1 || cur.width != 1) {
                        throw DimensionError("softmax: expected a flattened input");
                    }
                },
            },
            specs[i]);
        out.push_back(cur);
    }
    return out;
}

int64_t count_parameters(const std::vector<LayerSpec>& specs, Shape3 input) {
    const auto shapes = infer_shapes(specs, input);
    int64_t total = 0;
    Shape3 cur = input;
    for (size_t i = 0; i < specs.size(); ++i) {
        if (const auto* conv = std::get_if<Conv2dSpec>(&specs[i])) {
            total += (static_cast<int64_t>(conv->kernel_h) * conv->kernel_w * cur.channels + 1) *
                     conv->out_channels;
        } else if (const auto* dense = std::get_if<DenseSpec>(&specs[i])) {
            total += (cur.features() + 1) * dense->units;
        }
        cur = shapes[i];
    }
    return total;
}

std::vector<LayerSpec> default_cnn_layers(const ModelConfig& cfg, int num_classes) {
    if (num_classes < 2) {
        throw ValidationError("default_cnn_layers: need at least 2 classes");
    }
    std::vector<LayerSpec> layers;
    for (int filters : cfg.conv_filters) {
        layers.push_back(Conv2dSpec{cfg.kernel, cfg.kernel, filters});
        layers.push_back(ReluSpec{});
        layers.push_back(MaxPool2dSpec{cfg.pool});
        layers.push_back(DropoutSpec{cfg.conv_dropout});
    }
    layers.push_back(FlattenSpec{});
    layers.push_back(DenseSpec{cfg.dense_units});
    layers.push_back(ReluSpec{});
    layers.push_back(DropoutSpec{cfg.dense_dropout});
    layers.push_back(DenseSpec{num_classes});
    layers.push_back(SoftmaxSpec{});
    return layers;
}

std::vector<LayerSpec> logreg_layers(int num_classes) {
    if (num_classes < 2) {
        throw ValidationError("logreg_layers: need at least 2 classes");
    }
    return {FlattenSpec{}, DenseSpec{num_classes}, SoftmaxSpec{}};
}

} // namespace evopatch::nn
