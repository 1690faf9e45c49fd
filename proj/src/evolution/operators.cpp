#include "evopatch/evolution/operators.hpp"

#include <numeric>
#include <sstream>

#include "evopatch/error.hpp"

namespace evopatch::evolution {

void validate_params(const EvoParams& p) {
    if (p.population_size < 1) {
        throw ValidationError("evo params: population_size must be >= 1");
    }
    if (p.tournament_size < 1 || p.tournament_size > p.population_size) {
        throw ValidationError("evo params: tournament_size must be in [1, population_size]");
    }
    if (p.crossover_pct < 0 || p.mutation_pct < 0 || p.crossover_pct + p.mutation_pct != 100) {
        throw ValidationError("evo params: crossover_pct + mutation_pct must equal 100");
    }
    if (p.generations < 0) {
        throw ValidationError("evo params: generations must be >= 0");
    }
    if (p.w_s <= 0.0) {
        throw ValidationError("evo params: w_s must be positive");
    }
    if (p.min_alpha > p.max_alpha || p.min_beta > p.max_beta ||
        p.min_patches > p.max_patches) {
        throw ValidationError("evo params: every min bound must be <= its max bound");
    }
    if (p.min_alpha < 1 || p.min_beta < 1 || p.min_patches < 1) {
        throw ValidationError("evo params: sizes and patch counts start at 1");
    }
}

PatchOffset random_offset(int alpha, int beta, const Extent2i& dims, Rng& rng) {
    const int x_bound = dims.width / 2 - alpha;
    const int y_bound = dims.height / 2 - beta;
    if (x_bound <= 0 || y_bound <= 0) {
        std::ostringstream msg;
        msg << "offset bounds empty for " << alpha << "x" << beta << " patch on " << dims.width
            << "x" << dims.height << " image";
        throw DimensionError(msg.str());
    }
    PatchOffset o;
    o.x = rng.uniform_int(-x_bound, x_bound);
    o.y = rng.uniform_int(-y_bound, y_bound);
    return o;
}

Chromosome create_chromosome(const EvoParams& params, const Extent2i& dims, Rng& rng) {
    Chromosome c;
    c.alpha = rng.uniform_int(params.min_alpha, params.max_alpha);
    c.beta = rng.uniform_int(params.min_beta, params.max_beta);
    const int count = rng.uniform_int(params.min_patches, params.max_patches);
    c.patches.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        c.patches.push_back(random_offset(c.alpha, c.beta, dims, rng));
    }
    return c;
}

Chromosome mutate_add(const Chromosome& c, const Extent2i& dims, Rng& rng) {
    Chromosome out = c;
    out.patches.push_back(random_offset(c.alpha, c.beta, dims, rng));
    return out;
}

Chromosome mutate_remove(const Chromosome& c, Rng& rng) {
    Chromosome out = c;
    const int i = rng.uniform_int(0, static_cast<int>(out.patches.size()) - 1);
    out.patches.erase(out.patches.begin() + i);
    return out;
}

Chromosome mutate_change(const Chromosome& c, const Extent2i& dims, Rng& rng) {
    Chromosome out = c;
    const int i = rng.uniform_int(0, static_cast<int>(out.patches.size()) - 1);
    out.patches[static_cast<size_t>(i)] = random_offset(c.alpha, c.beta, dims, rng);
    return out;
}

Chromosome mutate_shift(const Chromosome& c, Rng& rng) {
    Chromosome out = c;
    const int i = rng.uniform_int(0, static_cast<int>(out.patches.size()) - 1);
    auto& gene = out.patches[static_cast<size_t>(i)];
    gene.x += rng.uniform_int(-c.alpha, c.alpha);
    gene.y += rng.uniform_int(-c.beta, c.beta);
    return out;
}

Chromosome mutate(const Chromosome& c, const EvoParams& params, const Extent2i& dims, Rng& rng) {
    enum class Move { add, remove, change, shift };
    std::vector<Move> legal;
    if (static_cast<int>(c.patches.size()) < params.max_patches) legal.push_back(Move::add);
    if (static_cast<int>(c.patches.size()) > params.min_patches) legal.push_back(Move::remove);
    legal.push_back(Move::change);
    legal.push_back(Move::shift);
    const auto pick = legal[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int>(legal.size()) - 1))];
    switch (pick) {
        case Move::add: return mutate_add(c, dims, rng);
        case Move::remove: return mutate_remove(c, rng);
        case Move::change: return mutate_change(c, dims, rng);
        case Move::shift: return mutate_shift(c, rng);
    }
    throw RuntimeFailure("mutate: unreachable");
}

std::pair<Chromosome, Chromosome> crossover_offspring(const Chromosome& p1, const Chromosome& p2,
                                                      Rng& rng) {
    const int i1 = rng.uniform_int(0, static_cast<int>(p1.patches.size()) - 1);
    const int i2 = rng.uniform_int(0, static_cast<int>(p2.patches.size()) - 1);
    Chromosome c1 = p1;
    Chromosome c2 = p2;
    c1.patches[static_cast<size_t>(i1)] = p2.patches[static_cast<size_t>(i2)];
    c2.patches[static_cast<size_t>(i2)] = p1.patches[static_cast<size_t>(i1)];
    return {std::move(c1), std::move(c2)};
}

Chromosome crossover(const Chromosome& p1, const Chromosome& p2, const FitnessFn& fitness,
                     Rng& rng) {
    auto [c1, c2] = crossover_offspring(p1, p2, rng);
    const double f1 = fitness(c1);
    const double f2 = fitness(c2);
    return f1 >= f2 ? c1 : c2;
}

int tournament_select(const std::vector<double>& fitness, int k, Rng& rng) {
    const int n = static_cast<int>(fitness.size());
    if (n == 0) {
        throw ValidationError("tournament: empty population");
    }
    if (k < 1 || k > n) {
        throw ValidationError("tournament: k must be in [1, population size]");
    }
    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    int best = -1;
    for (int j = 0; j < k; ++j) {
        std::swap(idx[static_cast<size_t>(j)],
                  idx[static_cast<size_t>(rng.uniform_int(j, n - 1))]);
        const int cand = idx[static_cast<size_t>(j)];
        if (best < 0 || fitness[static_cast<size_t>(cand)] > fitness[static_cast<size_t>(best)] ||
            (fitness[static_cast<size_t>(cand)] == fitness[static_cast<size_t>(best)] &&
             cand < best)) {
            best = cand;
        }
    }
    return best;
}

} // namespace evopatch::evolution
