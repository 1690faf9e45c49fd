#include "evopatch/data/dataset.hpp"

#include <sstream>

#include "evopatch/error.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::data {

Datasets prepare_datasets(const std::vector<imaging::GrayImage>& images, int num_classes,
                          const SplitPlan& plan, bool augment_train,
                          const imaging::AugmentParams& aug, std::uint64_t augment_seed) {
    const SplitIndices idx = apply_split(images, plan);
    Datasets out;
    out.num_classes = num_classes;
    for (int i : idx.val) out.val.push_back(images[static_cast<size_t>(i)]);
    for (int i : idx.test) out.test.push_back(images[static_cast<size_t>(i)]);
    for (int i : idx.train) {
        const auto& img = images[static_cast<size_t>(i)];
        out.train.push_back(img);
        if (augment_train) {
            Rng rng(Rng::derive(augment_seed, "augment", static_cast<std::uint64_t>(i)));
            for (auto& variant : imaging::augment(img, aug, rng)) {
                out.train.push_back(std::move(variant));
            }
        }
    }
    return out;
}

namespace {

StackedSet stack_with(const std::vector<imaging::GrayImage>& images,
                      imaging::StackedPatches (*stacker)(const imaging::GrayImage&, const void*),
                      const void* ctx) {
    if (images.empty()) {
        throw ValidationError("stacking: empty image list");
    }
    StackedSet out;
    for (size_t i = 0; i < images.size(); ++i) {
        const imaging::StackedPatches sp = stacker(images[i], ctx);
        const nn::Shape3 shape{sp.height, sp.width, sp.channels};
        if (i == 0) {
            out.shape = shape;
            out.samples.features = shape.features();
            out.samples.x.reserve(images.size() * static_cast<size_t>(out.samples.features));
            out.samples.y.reserve(images.size());
        } else if (!(shape == out.shape)) {
            std::ostringstream msg;
            msg << "stacking: sample " << i << " is " << shape.height << "x" << shape.width << "x"
                << shape.channels << ", expected " << out.shape.height << "x" << out.shape.width
                << "x" << out.shape.channels;
            throw DimensionError(msg.str());
        }
        // Plane-major [k][y][x] to channels-last [y][x][k].
        for (int y = 0; y < sp.height; ++y) {
            for (int x = 0; x < sp.width; ++x) {
                for (int k = 0; k < sp.channels; ++k) {
                    out.samples.x.push_back(sp.at(k, y, x));
                }
            }
        }
        out.samples.y.push_back(sp.label);
    }
    return out;
}

} // namespace

StackedSet to_patch_samples(const std::vector<imaging::GrayImage>& images,
                            const geometry::Chromosome& c) {
    return stack_with(
        images,
        [](const imaging::GrayImage& img, const void* ctx) {
            return imaging::extract_and_stack(img,
                                              *static_cast<const geometry::Chromosome*>(ctx));
        },
        &c);
}

StackedSet to_full_samples(const std::vector<imaging::GrayImage>& images) {
    return stack_with(
        images,
        [](const imaging::GrayImage& img, const void*) { return imaging::full_image_stack(img); },
        nullptr);
}

} // namespace evopatch::data
