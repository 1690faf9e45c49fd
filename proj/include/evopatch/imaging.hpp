#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evopatch/geometry.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::imaging {

using geometry::Chromosome;
using geometry::Extent2i;
using geometry::Point2i;

// 8-bit interleaved RGB, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<size_t>(y) * width + x); }
    const uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<size_t>(y) * width + x);
    }
};

// Single-channel raster with the nose landmark and sample metadata attached.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data; // row-major, width * height
    Point2i nose;
    int label = 0;
    std::string subject;

    uint8_t& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    Extent2i dims() const { return {width, height}; }
};

// K patch planes cut from one image, stacked channel-wise like the color
// planes of an RGB image. Plane-major storage: data[k * height * width + ...].
// Values are normalized to [0, 1].
struct StackedPatches {
    int height = 0;   // beta
    int width = 0;    // alpha
    int channels = 0; // patch count K
    std::vector<float> data;
    int label = 0;

    float at(int k, int y, int x) const {
        return data[(static_cast<size_t>(k) * height + y) * width + x];
    }
};

// Luminance conversion with BT.601 weights, rounded to nearest.
GrayImage to_gray(const RgbImage& rgb);

// Histogram equalization via the usual CDF remap; a constant image has a
// degenerate CDF and is returned unchanged.
GrayImage hist_equalize(const GrayImage& img);

// Strengths for the nine training-set variants. The two blur and two noise
// levels have no canonical values; these defaults are overridable in config.
struct AugmentParams {
    std::vector<double> blur_sigmas{1.0, 2.0};
    std::vector<double> noise_sigmas{8.0, 16.0};
    std::vector<double> rotations_deg{-10.0, -5.0, 5.0, 10.0};
};

// Exactly nine variants of a training image: horizontal flip, two blur
// strengths, two additive-noise strengths, four rotations. The nose landmark
// is transformed along with the pixels, so patch semantics survive.
std::vector<GrayImage> augment(const GrayImage& img, const AugmentParams& params, Rng& rng);

// Individual transforms, used by augment and tested directly.
GrayImage flip_horizontal(const GrayImage& img);
GrayImage gaussian_blur(const GrayImage& img, double sigma);
GrayImage add_gaussian_noise(const GrayImage& img, double sigma, Rng& rng);
// Rotation about the image center, bilinear sampling, edge-replicate fill.
GrayImage rotate(const GrayImage& img, double angle_deg);
// Where a point lands under the same rotation (unclamped, unrounded).
void rotate_point(double x, double y, double cx, double cy, double angle_deg, double& out_x,
                  double& out_y);

// Cut each gene's rectangle (clamped into bounds) and stack the windows as
// channels in gene order, normalized by 255.
StackedPatches extract_and_stack(const GrayImage& img, const Chromosome& c);

// The whole image as a single-channel stack; the baseline input path.
StackedPatches full_image_stack(const GrayImage& img);

// Copy with 1-px white borders burned in around each patch rectangle.
GrayImage draw_patch_borders(const GrayImage& img, const Chromosome& c);

// One patch window as its own image (metadata copied from the source).
GrayImage extract_patch_image(const GrayImage& img, const Chromosome& c, int patch_index);

} // namespace evopatch::imaging
