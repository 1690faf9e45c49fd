#include "evopatch/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "evopatch/error.hpp"

namespace evopatch::imaging {

namespace {

uint8_t clamp_u8(double v) {
    return static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
}

int clamp_coord(int v, int hi) {
    return std::clamp(v, 0, hi - 1);
}

} // namespace

GrayImage to_gray(const RgbImage& rgb) {
    if (rgb.width <= 0 || rgb.height <= 0 ||
        rgb.data.size() != static_cast<size_t>(rgb.width) * rgb.height * 3) {
        throw ValidationError("to_gray: malformed RGB image");
    }
    GrayImage out;
    out.width = rgb.width;
    out.height = rgb.height;
    out.data.resize(static_cast<size_t>(rgb.width) * rgb.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const uint8_t* p = rgb.data.data() + 3 * i;
        const double y = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        out.data[i] = static_cast<uint8_t>(std::lround(std::min(y, 255.0)));
    }
    return out;
}

GrayImage hist_equalize(const GrayImage& img) {
    const size_t n = img.data.size();
    if (n == 0) {
        throw ValidationError("hist_equalize: empty image");
    }
    std::array<size_t, 256> hist{};
    for (uint8_t v : img.data) {
        ++hist[v];
    }
    std::array<size_t, 256> cdf{};
    size_t running = 0;
    size_t cdf_min = 0;
    for (int v = 0; v < 256; ++v) {
        running += hist[v];
        cdf[v] = running;
        if (cdf_min == 0 && hist[v] > 0) {
            cdf_min = running;
        }
    }
    GrayImage out = img;
    if (n == cdf_min) {
        // Constant image: remap is 0/0, leave untouched.
        return out;
    }
    std::array<uint8_t, 256> lut{};
    const double denom = static_cast<double>(n - cdf_min);
    for (int v = 0; v < 256; ++v) {
        lut[v] = static_cast<uint8_t>(
            std::lround(static_cast<double>(cdf[v] - cdf_min) / denom * 255.0));
    }
    for (auto& v : out.data) {
        v = lut[v];
    }
    return out;
}

GrayImage flip_horizontal(const GrayImage& img) {
    GrayImage out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            out.at(x, y) = img.at(img.width - 1 - x, y);
        }
    }
    out.nose.x = img.width - 1 - img.nose.x;
    return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) {
        k /= sum;
    }

    // Separable passes with replicated edges; intermediate kept in double.
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[i + radius] * img.at(clamp_coord(x + i, img.width), y);
            }
            tmp[static_cast<size_t>(y) * img.width + x] = acc;
        }
    }
    GrayImage out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                acc += kernel[i + radius] * tmp[static_cast<size_t>(clamp_coord(y + i, img.height)) * img.width + x];
            }
            out.at(x, y) = clamp_u8(std::lround(acc));
        }
    }
    return out;
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, Rng& rng) {
    GrayImage out = img;
    for (auto& v : out.data) {
        v = clamp_u8(std::lround(v + rng.normal(0.0, sigma)));
    }
    return out;
}

void rotate_point(double x, double y, double cx, double cy, double angle_deg, double& out_x,
                  double& out_y) {
    const double a = angle_deg * M_PI / 180.0;
    const double c = std::cos(a);
    const double s = std::sin(a);
    const double dx = x - cx;
    const double dy = y - cy;
    out_x = cx + c * dx - s * dy;
    out_y = cy + s * dx + c * dy;
}

GrayImage rotate(const GrayImage& img, double angle_deg) {
    GrayImage out = img;
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // Inverse mapping: where does this output pixel come from.
            double sx, sy;
            rotate_point(x, y, cx, cy, -angle_deg, sx, sy);
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0;
            const double fy = sy - y0;
            const double v00 = img.at(clamp_coord(x0, img.width), clamp_coord(y0, img.height));
            const double v10 = img.at(clamp_coord(x0 + 1, img.width), clamp_coord(y0, img.height));
            const double v01 = img.at(clamp_coord(x0, img.width), clamp_coord(y0 + 1, img.height));
            const double v11 =
                img.at(clamp_coord(x0 + 1, img.width), clamp_coord(y0 + 1, img.height));
            const double v = (1 - fy) * ((1 - fx) * v00 + fx * v10) +
                             fy * ((1 - fx) * v01 + fx * v11);
            out.at(x, y) = clamp_u8(std::lround(v));
        }
    }
    double nx, ny;
    rotate_point(img.nose.x, img.nose.y, cx, cy, angle_deg, nx, ny);
    out.nose.x = clamp_coord(static_cast<int>(std::lround(nx)), img.width);
    out.nose.y = clamp_coord(static_cast<int>(std::lround(ny)), img.height);
    return out;
}

std::vector<GrayImage> augment(const GrayImage& img, const AugmentParams& params, Rng& rng) {
    std::vector<GrayImage> out;
    out.reserve(1 + params.blur_sigmas.size() + params.noise_sigmas.size() +
                params.rotations_deg.size());
    out.push_back(flip_horizontal(img));
    for (double sigma : params.blur_sigmas) {
        out.push_back(gaussian_blur(img, sigma));
    }
    for (double sigma : params.noise_sigmas) {
        out.push_back(add_gaussian_noise(img, sigma, rng));
    }
    for (double deg : params.rotations_deg) {
        out.push_back(rotate(img, deg));
    }
    return out;
}

StackedPatches extract_and_stack(const GrayImage& img, const Chromosome& c) {
    StackedPatches out;
    out.height = c.beta;
    out.width = c.alpha;
    out.channels = static_cast<int>(c.patches.size());
    out.label = img.label;
    out.data.resize(static_cast<size_t>(out.channels) * c.beta * c.alpha);
    size_t idx = 0;
    for (const auto& offset : c.patches) {
        const auto rect = geometry::resolve_rect(offset, img.nose, c.alpha, c.beta, img.dims());
        for (int y = 0; y < c.beta; ++y) {
            for (int x = 0; x < c.alpha; ++x) {
                out.data[idx++] = img.at(rect.left + x, rect.top + y) / 255.0f;
            }
        }
    }
    return out;
}

StackedPatches full_image_stack(const GrayImage& img) {
    StackedPatches out;
    out.height = img.height;
    out.width = img.width;
    out.channels = 1;
    out.label = img.label;
    out.data.resize(img.data.size());
    for (size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = img.data[i] / 255.0f;
    }
    return out;
}

GrayImage draw_patch_borders(const GrayImage& img, const Chromosome& c) {
    GrayImage out = img;
    for (const auto& offset : c.patches) {
        const auto rect = geometry::resolve_rect(offset, img.nose, c.alpha, c.beta, img.dims());
        const int right = rect.left + rect.width - 1;
        const int bottom = rect.top + rect.height - 1;
        for (int x = rect.left; x <= right; ++x) {
            out.at(x, rect.top) = 255;
            out.at(x, bottom) = 255;
        }
        for (int y = rect.top; y <= bottom; ++y) {
            out.at(rect.left, y) = 255;
            out.at(right, y) = 255;
        }
    }
    return out;
}

GrayImage extract_patch_image(const GrayImage& img, const Chromosome& c, int patch_index) {
    const auto& offset = c.patches.at(patch_index);
    const auto rect = geometry::resolve_rect(offset, img.nose, c.alpha, c.beta, img.dims());
    GrayImage out;
    out.width = rect.width;
    out.height = rect.height;
    out.label = img.label;
    out.subject = img.subject;
    out.nose = {0, 0};
    out.data.resize(static_cast<size_t>(rect.width) * rect.height);
    for (int y = 0; y < rect.height; ++y) {
        for (int x = 0; x < rect.width; ++x) {
            out.at(x, y) = img.at(rect.left + x, rect.top + y);
        }
    }
    return out;
}

} // namespace evopatch::imaging
