#pragma once

#include <cstddef>
#include <vector>

namespace evopatch::nn {

// Batch-major NHWC tensor. float in run mode, double where gradient checks
// need the headroom.
template <typename T>
struct Tensor4 {
    int batch = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<T> data;

    Tensor4() = default;
    Tensor4(int b, int h, int w, int c)
        : batch(b), height(h), width(w), channels(c),
          data(static_cast<size_t>(b) * h * w * c, T{}) {}

    size_t size() const { return data.size(); }

    T& at(int b, int y, int x, int c) {
        return data[((static_cast<size_t>(b) * height + y) * width + x) * channels + c];
    }
    T at(int b, int y, int x, int c) const {
        return data[((static_cast<size_t>(b) * height + y) * width + x) * channels + c];
    }

    // Per-sample feature count; NHWC keeps flatten a pure reshape.
    size_t features() const { return static_cast<size_t>(height) * width * channels; }
};

} // namespace evopatch::nn
