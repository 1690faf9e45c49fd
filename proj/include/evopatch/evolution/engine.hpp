#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "evopatch/evolution/fitness.hpp"
#include "evopatch/evolution/operators.hpp"

namespace evopatch::evolution {

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double best_s = 0.0;          // s_c of the generation's best member
    std::int64_t best_params = 0; // p_c of the generation's best member
};

struct EvolveResult {
    FitnessRecord best;                   // best-ever across all generations
    std::vector<GenerationStats> history; // generations + 1 entries, gen 0 first
};

// Must be callable from multiple threads at once; evaluate_fitness with a
// shared cache satisfies this.
using Evaluator = std::function<FitnessRecord(const Chromosome&)>;

// Generational loop: seed a population with create_chromosome, then per
// generation carry the single best member unchanged and fill every other
// slot by tournament selection plus exactly one operator (crossover with
// probability crossover_pct/100, else mutation). Offspring of crossover are
// both evaluated and the fitter kept. Every slot draws from its own named
// substream of seed, and evaluations are memoized by signature, so the
// outcome is independent of evaluation scheduling.
EvolveResult evolve(const EvoParams& params, const Extent2i& image_dims,
                    const Evaluator& evaluate, std::uint64_t seed);

} // namespace evopatch::evolution
