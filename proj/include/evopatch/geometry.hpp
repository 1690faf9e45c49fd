#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace evopatch::geometry {

struct Point2i {
    int x = 0;
    int y = 0;
    bool operator==(const Point2i&) const = default;
};

struct Extent2i {
    int width = 0;
    int height = 0;
    bool operator==(const Extent2i&) const = default;
};

// Offset of a patch's top-left corner from the nose landmark, in pixels.
struct PatchOffset {
    int x = 0;
    int y = 0;
    bool operator==(const PatchOffset&) const = default;
};

// Genome: one patch size shared by all patches, plus an ordered list of
// nose-relative offsets. alpha and beta are fixed for the lifetime of a
// chromosome and of everything derived from it by mutation.
struct Chromosome {
    int alpha = 0; // patch width
    int beta = 0;  // patch height
    std::vector<PatchOffset> patches;

    bool operator==(const Chromosome&) const = default;
};

// A concrete patch rectangle in absolute image coordinates.
struct PatchRect {
    int left = 0;
    int top = 0;
    int width = 0;
    int height = 0;
    bool operator==(const PatchRect&) const = default;
};

// Realize an offset as an absolute rectangle: anchor at nose + offset, then
// clamp so the full alpha x beta window stays inside the image. The size is
// never shrunk; only the corner moves. Throws DimensionError when the patch
// cannot fit at all.
PatchRect resolve_rect(const PatchOffset& offset, const Point2i& nose, int alpha, int beta,
                       const Extent2i& image_dims);

// The same rectangle before clamping; exposed for translation tests and
// overlay diagnostics.
PatchRect unclamped_rect(const PatchOffset& offset, const Point2i& nose, int alpha, int beta);

// Canonical byte string identifying a chromosome for caching. Patch order is
// irrelevant to what a chromosome extracts, so the signature sorts the
// offsets; duplicates and the patch count still matter.
std::string chromosome_signature(const Chromosome& c);

// On-disk genome format: {"alpha": int, "beta": int, "patches": [[x,y],...]}
nlohmann::json chromosome_to_json(const Chromosome& c);
Chromosome chromosome_from_json(const nlohmann::json& j);

Chromosome load_chromosome(const std::string& path);
void save_chromosome(const Chromosome& c, const std::string& path);

} // namespace evopatch::geometry
