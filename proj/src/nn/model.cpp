#include "evopatch/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "evopatch/error.hpp"
#include "evopatch/nn/kernels.hpp"

namespace evopatch::nn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

template <typename T>
Model<T>::Model(Shape3 input, std::vector<LayerSpec> specs, std::uint64_t seed)
    : input_(input), specs_(std::move(specs)) {
    if (specs_.empty()) {
        throw ValidationError("model: empty layer list");
    }
    for (size_t i = 0; i < specs_.size(); ++i) {
        if (std::holds_alternative<SoftmaxSpec>(specs_[i]) && i + 1 != specs_.size()) {
            throw ValidationError("model: softmax allowed only as the last layer");
        }
    }
    if (!std::holds_alternative<SoftmaxSpec>(specs_.back())) {
        throw ValidationError("model: last layer must be softmax");
    }
    shapes_ = infer_shapes(specs_, input_);
    num_classes_ = shapes_.back().channels;
    param_count_ = count_parameters(specs_, input_);

    // Which dense layer is last decides Glorot vs He.
    size_t last_dense = specs_.size();
    for (size_t i = 0; i < specs_.size(); ++i) {
        if (std::holds_alternative<DenseSpec>(specs_[i])) last_dense = i;
        if (std::holds_alternative<DropoutSpec>(specs_[i])) has_dropout_ = true;
    }

    Rng rng(seed);
    states_.resize(specs_.size());
    acts_.resize(specs_.size() + 1);
    pool_argmax_.resize(specs_.size());
    drop_mask_.resize(specs_.size());
    Shape3 cur = input_;
    for (size_t i = 0; i < specs_.size(); ++i) {
        auto& st = states_[i];
        if (const auto* conv = std::get_if<Conv2dSpec>(&specs_[i])) {
            const size_t wn = static_cast<size_t>(conv->kernel_h) * conv->kernel_w *
                              cur.channels * conv->out_channels;
            const double fan_in =
                static_cast<double>(conv->kernel_h) * conv->kernel_w * cur.channels;
            const double limit = std::sqrt(6.0 / fan_in);
            st.w.resize(wn);
            for (auto& v : st.w) v = static_cast<T>(rng.uniform_real(-limit, limit));
            st.b.assign(static_cast<size_t>(conv->out_channels), T{});
        } else if (const auto* dense = std::get_if<DenseSpec>(&specs_[i])) {
            const auto fan_in = static_cast<double>(cur.features());
            const size_t wn = static_cast<size_t>(cur.features()) * dense->units;
            const double limit = (i == last_dense)
                                     ? std::sqrt(6.0 / (fan_in + dense->units))
                                     : std::sqrt(6.0 / fan_in);
            st.w.resize(wn);
            for (auto& v : st.w) v = static_cast<T>(rng.uniform_real(-limit, limit));
            st.b.assign(static_cast<size_t>(dense->units), T{});
        }
        st.dw.assign(st.w.size(), T{});
        st.db.assign(st.b.size(), T{});
        st.mw.assign(st.w.size(), T{});
        st.vw.assign(st.w.size(), T{});
        st.mb.assign(st.b.size(), T{});
        st.vb.assign(st.b.size(), T{});
        cur = shapes_[i];
    }
}

template <typename T>
const std::vector<T>& Model<T>::forward(const std::vector<T>& x, int batch, bool training,
                                        Rng* rng) {
    if (batch < 1) {
        throw ValidationError("forward: batch must be >= 1");
    }
    if (x.size() != static_cast<size_t>(batch) * input_.features()) {
        throw DimensionError("forward: input size does not match batch * input features");
    }
    if (training && has_dropout_ && rng == nullptr) {
        throw ValidationError("forward: training with dropout needs an rng");
    }
    batch_ = batch;
    forward_training_ = training;
    acts_[0] = x;
    Shape3 cur = input_;
    for (size_t i = 0; i < specs_.size(); ++i) {
        const auto& in = acts_[i];
        auto& out = acts_[i + 1];
        const Shape3 next = shapes_[i];
        out.resize(static_cast<size_t>(batch) * next.features());
        std::visit(
            overloaded{
                [&](const Conv2dSpec& s) {
                    kernels::conv2d_forward(in.data(), batch, cur.height, cur.width, cur.channels,
                                            states_[i].w.data(), states_[i].b.data(), s.kernel_h,
                                            s.kernel_w, s.out_channels, out.data());
                },
                [&](const MaxPool2dSpec& s) {
                    pool_argmax_[i].resize(out.size());
                    kernels::maxpool_forward(in.data(), batch, cur.height, cur.width, cur.channels,
                                             s.window, out.data(), pool_argmax_[i].data());
                },
                [&](const ReluSpec&) {
                    const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static) if (n > 1)
                    for (long j = 0; j < n; ++j) {
                        out[j] = in[j] > T{} ? in[j] : T{};
                    }
                },
                [&](const DropoutSpec& s) {
                    if (training) {
                        auto& mask = drop_mask_[i];
                        mask.resize(in.size());
                        const T keep_scale = static_cast<T>(1.0 / (1.0 - s.rate));
                        for (size_t j = 0; j < in.size(); ++j) {
                            mask[j] = rng->uniform01() < s.rate ? T{} : keep_scale;
                        }
                        const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static) if (n > 1)
                        for (long j = 0; j < n; ++j) {
                            out[j] = in[j] * mask[j];
                        }
                    } else {
                        out = in;
                    }
                },
                [&](const FlattenSpec&) { out = in; },
                [&](const DenseSpec& s) {
                    kernels::dense_forward(in.data(), batch, static_cast<int>(cur.features()),
                                           states_[i].w.data(), states_[i].b.data(), s.units,
                                           out.data());
                },
                [&](const SoftmaxSpec&) {
                    const int c = cur.channels;
#pragma omp parallel for schedule(static) if (batch > 1)
                    for (int b = 0; b < batch; ++b) {
                        const T* row = in.data() + static_cast<size_t>(b) * c;
                        T* dst = out.data() + static_cast<size_t>(b) * c;
                        T mx = row[0];
                        for (int j = 1; j < c; ++j) mx = std::max(mx, row[j]);
                        T sum{};
                        for (int j = 0; j < c; ++j) {
                            dst[j] = std::exp(row[j] - mx);
                            sum += dst[j];
                        }
                        for (int j = 0; j < c; ++j) dst[j] /= sum;
                    }
                },
            },
            specs_[i]);
        cur = next;
    }
    return acts_.back();
}

template <typename T>
void Model<T>::backward(const std::vector<int>& labels) {
    if (batch_ < 1) {
        throw ValidationError("backward: no cached forward pass");
    }
    if (labels.size() != static_cast<size_t>(batch_)) {
        throw DimensionError("backward: label count does not match batch");
    }
    // Fused softmax + cross-entropy: gradient at the logits.
    const auto& probs = acts_.back();
    std::vector<T> dy(probs.size());
    const T inv_b = static_cast<T>(1.0 / batch_);
    for (int b = 0; b < batch_; ++b) {
        if (labels[b] < 0 || labels[b] >= num_classes_) {
            throw ValidationError("backward: label out of range");
        }
        for (int c = 0; c < num_classes_; ++c) {
            const size_t j = static_cast<size_t>(b) * num_classes_ + c;
            dy[j] = (probs[j] - (labels[b] == c ? T{1} : T{})) * inv_b;
        }
    }

    std::vector<T> dx;
    for (size_t idx = specs_.size() - 1; idx-- > 0;) {
        const auto& in = acts_[idx];
        const Shape3 cur = idx == 0 ? input_ : shapes_[idx - 1];
        dx.resize(in.size());
        std::visit(
            overloaded{
                [&](const Conv2dSpec& s) {
                    kernels::conv2d_backward_params(in.data(), dy.data(), batch_, cur.height,
                                                    cur.width, cur.channels, s.kernel_h,
                                                    s.kernel_w, s.out_channels,
                                                    states_[idx].dw.data(),
                                                    states_[idx].db.data());
                    kernels::conv2d_backward_input(dy.data(), batch_, cur.height, cur.width,
                                                   cur.channels, states_[idx].w.data(), s.kernel_h,
                                                   s.kernel_w, s.out_channels, dx.data());
                },
                [&](const MaxPool2dSpec& s) {
                    kernels::maxpool_backward(dy.data(), batch_, cur.height, cur.width,
                                              cur.channels, s.window, pool_argmax_[idx].data(),
                                              dx.data());
                },
                [&](const ReluSpec&) {
                    const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static) if (n > 1)
                    for (long j = 0; j < n; ++j) {
                        dx[j] = in[j] > T{} ? dy[j] : T{};
                    }
                },
                [&](const DropoutSpec&) {
                    if (forward_training_) {
                        const auto& mask = drop_mask_[idx];
                        const long n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static) if (n > 1)
                        for (long j = 0; j < n; ++j) {
                            dx[j] = dy[j] * mask[j];
                        }
                    } else {
                        dx = dy;
                    }
                },
                [&](const FlattenSpec&) { dx = dy; },
                [&](const DenseSpec& s) {
                    kernels::dense_backward_params(in.data(), dy.data(), batch_,
                                                   static_cast<int>(cur.features()), s.units,
                                                   states_[idx].dw.data(),
                                                   states_[idx].db.data());
                    kernels::dense_backward_input(dy.data(), batch_,
                                                  static_cast<int>(cur.features()),
                                                  states_[idx].w.data(), s.units, dx.data());
                },
                [&](const SoftmaxSpec&) {
                    throw ValidationError("backward: softmax before the last layer");
                },
            },
            specs_[idx]);
        dy.swap(dx);
    }
}

template <typename T>
void Model<T>::zero_grads() {
    for (auto& st : states_) {
        std::fill(st.dw.begin(), st.dw.end(), T{});
        std::fill(st.db.begin(), st.db.end(), T{});
    }
}

template <typename T>
void Model<T>::adam_update(const AdamConfig& cfg) {
    ++step_;
    for (auto& st : states_) {
        if (!st.w.empty()) {
            adam_step(st.w.data(), st.dw.data(), st.mw.data(), st.vw.data(), st.w.size(), cfg,
                      step_);
        }
        if (!st.b.empty()) {
            adam_step(st.b.data(), st.db.data(), st.mb.data(), st.vb.data(), st.b.size(), cfg,
                      step_);
        }
    }
}

template <typename T>
std::vector<T>& Model<T>::locate(std::int64_t i, std::int64_t& offset, bool grads) {
    if (i < 0 || i >= param_count_) {
        throw ValidationError("model: parameter index out of range");
    }
    std::int64_t pos = i;
    for (auto& st : states_) {
        const auto wn = static_cast<std::int64_t>(st.w.size());
        if (pos < wn) {
            offset = pos;
            return grads ? st.dw : st.w;
        }
        pos -= wn;
        const auto bn = static_cast<std::int64_t>(st.b.size());
        if (pos < bn) {
            offset = pos;
            return grads ? st.db : st.b;
        }
        pos -= bn;
    }
    throw ValidationError("model: parameter index out of range");
}

template <typename T>
T Model<T>::param_at(std::int64_t i) const {
    std::int64_t off = 0;
    return const_cast<Model<T>*>(this)->locate(i, off, false)[off];
}

template <typename T>
void Model<T>::set_param_at(std::int64_t i, T value) {
    std::int64_t off = 0;
    locate(i, off, false)[off] = value;
}

template <typename T>
T Model<T>::grad_at(std::int64_t i) const {
    std::int64_t off = 0;
    return const_cast<Model<T>*>(this)->locate(i, off, true)[off];
}

template class Model<float>;
template class Model<double>;

} // namespace evopatch::nn
