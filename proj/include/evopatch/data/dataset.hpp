#pragma once

#include <cstdint>
#include <vector>

#include "evopatch/data/split.hpp"
#include "evopatch/geometry.hpp"
#include "evopatch/imaging.hpp"
#include "evopatch/nn/train.hpp"

namespace evopatch::data {

struct Datasets {
    std::vector<imaging::GrayImage> train;
    std::vector<imaging::GrayImage> val;
    std::vector<imaging::GrayImage> test;
    int num_classes = 0;
};

// Apply a split plan and, when asked, expand each training image into itself
// plus its nine augmented variants (val and test stay untouched). Noise draws
// come from a per-image substream of augment_seed, so the result does not
// depend on iteration order.
Datasets prepare_datasets(const std::vector<imaging::GrayImage>& images, int num_classes,
                          const SplitPlan& plan, bool augment_train,
                          const imaging::AugmentParams& aug, std::uint64_t augment_seed);

// Flat model-ready samples plus the per-sample shape. The stacked planes are
// interleaved to channels-last here, matching the conv kernels' layout.
struct StackedSet {
    nn::SampleSet<float> samples;
    nn::Shape3 shape;
};

// Every image through extract_and_stack with the chromosome.
StackedSet to_patch_samples(const std::vector<imaging::GrayImage>& images,
                            const geometry::Chromosome& c);

// Every image whole, as a single-channel stack; the baseline input path.
StackedSet to_full_samples(const std::vector<imaging::GrayImage>& images);

} // namespace evopatch::data
