#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "evopatch/evolution/params.hpp"
#include "evopatch/geometry.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::evolution {

using geometry::Chromosome;
using geometry::Extent2i;
using geometry::PatchOffset;

// One fresh offset for a patch of the given size: x uniform in
// [-(W/2 - alpha), W/2 - alpha], y uniform in [-(H/2 - beta), H/2 - beta],
// integer division. Throws DimensionError when either range is empty
// (W/2 - alpha <= 0 or H/2 - beta <= 0).
PatchOffset random_offset(int alpha, int beta, const Extent2i& image_dims, Rng& rng);

// Draw alpha, beta, patch count, then each offset (x before y), in that
// order. Bounds come from params; offsets from random_offset.
Chromosome create_chromosome(const EvoParams& params, const Extent2i& image_dims, Rng& rng);

// The four mutation moves. Each returns a modified copy; alpha and beta are
// never touched. add draws a fresh offset; remove deletes a uniformly chosen
// gene; change redraws a uniformly chosen gene's offset; shift displaces a
// uniformly chosen gene by dx in [-alpha, alpha], dy in [-beta, beta]
// (shifted offsets may leave the init bounds; rect resolution clamps later).
Chromosome mutate_add(const Chromosome& c, const Extent2i& image_dims, Rng& rng);
Chromosome mutate_remove(const Chromosome& c, Rng& rng);
Chromosome mutate_change(const Chromosome& c, const Extent2i& image_dims, Rng& rng);
Chromosome mutate_shift(const Chromosome& c, Rng& rng);

// Pick uniformly among the moves that are legal right now: add only below
// max_patches, remove only above min_patches, change and shift always.
Chromosome mutate(const Chromosome& c, const EvoParams& params, const Extent2i& image_dims,
                  Rng& rng);

// One-gene swap: draw gene index i1 of p1 and i2 of p2; first offspring is
// p1 with gene i1 replaced by p2's gene i2, second is p2 with gene i2
// replaced by p1's gene i1. Sizes and alpha/beta follow the source parent.
std::pair<Chromosome, Chromosome> crossover_offspring(const Chromosome& p1, const Chromosome& p2,
                                                      Rng& rng);

// Evaluate both offspring and return the fitter; ties go to the first.
using FitnessFn = std::function<double(const Chromosome&)>;
Chromosome crossover(const Chromosome& p1, const Chromosome& p2, const FitnessFn& fitness,
                     Rng& rng);

// Sample k members without replacement and return the index of the best
// fitness; ties resolve to the smallest population index.
int tournament_select(const std::vector<double>& fitness, int k, Rng& rng);

} // namespace evopatch::evolution
