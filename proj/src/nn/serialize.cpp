#include "evopatch/nn/serialize.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <variant>

#include "evopatch/error.hpp"

namespace evopatch::nn {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'P', 'M'};
constexpr std::uint32_t kVersion = 1;

enum class Tag : std::uint8_t {
    conv2d = 1,
    maxpool2d = 2,
    relu = 3,
    dropout = 4,
    flatten = 5,
    dense = 6,
    softmax = 7,
};

static_assert(std::endian::native == std::endian::little,
              "serializer assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!is) {
        throw ValidationError("model file truncated: " + path);
    }
    return v;
}

} // namespace

void save_model(const std::string& path, const Model<float>& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw IoError("cannot open model file for writing: " + path);
    }
    os.write(kMagic, sizeof(kMagic));
    put(os, kVersion);
    const auto& in = model.input_shape();
    put(os, static_cast<std::int32_t>(in.height));
    put(os, static_cast<std::int32_t>(in.width));
    put(os, static_cast<std::int32_t>(in.channels));
    const auto& specs = model.specs();
    put(os, static_cast<std::uint32_t>(specs.size()));
    for (const auto& spec : specs) {
        if (const auto* s = std::get_if<Conv2dSpec>(&spec)) {
            put(os, static_cast<std::uint8_t>(Tag::conv2d));
            put(os, static_cast<std::int32_t>(s->kernel_h));
            put(os, static_cast<std::int32_t>(s->kernel_w));
            put(os, static_cast<std::int32_t>(s->out_channels));
        } else if (const auto* s = std::get_if<MaxPool2dSpec>(&spec)) {
            put(os, static_cast<std::uint8_t>(Tag::maxpool2d));
            put(os, static_cast<std::int32_t>(s->window));
        } else if (std::holds_alternative<ReluSpec>(spec)) {
            put(os, static_cast<std::uint8_t>(Tag::relu));
        } else if (const auto* s = std::get_if<DropoutSpec>(&spec)) {
            put(os, static_cast<std::uint8_t>(Tag::dropout));
            put(os, s->rate);
        } else if (std::holds_alternative<FlattenSpec>(spec)) {
            put(os, static_cast<std::uint8_t>(Tag::flatten));
        } else if (const auto* s = std::get_if<DenseSpec>(&spec)) {
            put(os, static_cast<std::uint8_t>(Tag::dense));
            put(os, static_cast<std::int32_t>(s->units));
        } else {
            put(os, static_cast<std::uint8_t>(Tag::softmax));
        }
    }
    for (size_t i = 0; i < specs.size(); ++i) {
        const auto& w = model.layer_weights(i);
        const auto& b = model.layer_bias(i);
        put(os, static_cast<std::uint64_t>(w.size()));
        os.write(reinterpret_cast<const char*>(w.data()),
                 static_cast<std::streamsize>(w.size() * sizeof(float)));
        put(os, static_cast<std::uint64_t>(b.size()));
        os.write(reinterpret_cast<const char*>(b.data()),
                 static_cast<std::streamsize>(b.size() * sizeof(float)));
    }
    if (!os) {
        throw IoError("write failed: " + path);
    }
}

Model<float> load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw IoError("cannot open model file: " + path);
    }
    char magic[4];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ValidationError("not a model file: " + path);
    }
    const auto version = get<std::uint32_t>(is, path);
    if (version != kVersion) {
        throw ValidationError("unsupported model version " + std::to_string(version) + ": " +
                              path);
    }
    Shape3 input;
    input.height = get<std::int32_t>(is, path);
    input.width = get<std::int32_t>(is, path);
    input.channels = get<std::int32_t>(is, path);
    const auto layer_count = get<std::uint32_t>(is, path);
    std::vector<LayerSpec> specs;
    specs.reserve(layer_count);
    for (std::uint32_t i = 0; i < layer_count; ++i) {
        const auto tag = static_cast<Tag>(get<std::uint8_t>(is, path));
        switch (tag) {
            case Tag::conv2d: {
                Conv2dSpec s;
                s.kernel_h = get<std::int32_t>(is, path);
                s.kernel_w = get<std::int32_t>(is, path);
                s.out_channels = get<std::int32_t>(is, path);
                specs.emplace_back(s);
                break;
            }
            case Tag::maxpool2d:
                specs.emplace_back(MaxPool2dSpec{get<std::int32_t>(is, path)});
                break;
            case Tag::relu:
                specs.emplace_back(ReluSpec{});
                break;
            case Tag::dropout:
                specs.emplace_back(DropoutSpec{get<double>(is, path)});
                break;
            case Tag::flatten:
                specs.emplace_back(FlattenSpec{});
                break;
            case Tag::dense:
                specs.emplace_back(DenseSpec{get<std::int32_t>(is, path)});
                break;
            case Tag::softmax:
                specs.emplace_back(SoftmaxSpec{});
                break;
            default:
                throw ValidationError("unknown layer tag in model file: " + path);
        }
    }
    Model<float> model(input, specs, 0);
    for (size_t i = 0; i < specs.size(); ++i) {
        auto& w = model.layer_weights(i);
        auto& b = model.layer_bias(i);
        const auto wn = get<std::uint64_t>(is, path);
        if (wn != w.size()) {
            throw ValidationError("model file weight count mismatch: " + path);
        }
        is.read(reinterpret_cast<char*>(w.data()),
                static_cast<std::streamsize>(wn * sizeof(float)));
        const auto bn = get<std::uint64_t>(is, path);
        if (bn != b.size()) {
            throw ValidationError("model file bias count mismatch: " + path);
        }
        is.read(reinterpret_cast<char*>(b.data()),
                static_cast<std::streamsize>(bn * sizeof(float)));
        if (!is) {
            throw ValidationError("model file truncated: " + path);
        }
    }
    return model;
}

} // namespace evopatch::nn
