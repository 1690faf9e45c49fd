#include "evopatch/evolution/region_score.hpp"

#include <algorithm>

#include "evopatch/error.hpp"

namespace evopatch::evolution {

double region_iou(const data::GlyphRegion& a, const data::GlyphRegion& b) {
    const int ix = std::max(0, std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x));
    const int iy = std::max(0, std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y));
    const double inter = static_cast<double>(ix) * iy;
    const double uni =
        static_cast<double>(a.width) * a.height + static_cast<double>(b.width) * b.height - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

double mean_best_iou(const geometry::Chromosome& c,
                     const std::vector<std::vector<data::GlyphRegion>>& regions) {
    if (c.patches.empty()) {
        throw ValidationError("region score: chromosome has no patches");
    }
    double sum = 0.0;
    for (const auto& gene : c.patches) {
        const data::GlyphRegion patch{gene.x, gene.y, c.alpha, c.beta};
        double best = 0.0;
        for (const auto& cls : regions) {
            for (const auto& r : cls) {
                best = std::max(best, region_iou(patch, r));
            }
        }
        sum += best;
    }
    return sum / static_cast<double>(c.patches.size());
}

} // namespace evopatch::evolution
