#pragma once

#include <vector>

#include "evopatch/data/synthetic.hpp"
#include "evopatch/geometry.hpp"

namespace evopatch::evolution {

// Overlap-over-union of two nose-relative rectangles.
double region_iou(const data::GlyphRegion& a, const data::GlyphRegion& b);

// How well a chromosome's patches line up with ground-truth regions: every
// gene is taken as its unclamped alpha x beta rectangle in nose-relative
// space, scored by its best IoU against any region of any class, and the
// per-gene scores are averaged.
double mean_best_iou(const geometry::Chromosome& c,
                     const std::vector<std::vector<data::GlyphRegion>>& regions);

} // namespace evopatch::evolution
