#pragma once

namespace evopatch::evolution {

// GA controls. Defaults follow the reference configuration: population 100,
// tournament 7, 50/50 crossover/mutation, 15 generations, patch sizes and
// counts bounded as below, fitness accuracy weight 5.
struct EvoParams {
    int population_size = 100;
    int tournament_size = 7;
    int crossover_pct = 50;
    int mutation_pct = 50;
    int generations = 15;
    double w_s = 5.0;
    int min_alpha = 30;
    int max_alpha = 50;
    int min_beta = 30;
    int max_beta = 50;
    int min_patches = 1;
    int max_patches = 4;
};

// crossover_pct + mutation_pct must equal 100 (each offspring slot gets
// exactly one operator), tournament must fit in the population, and every
// min/max pair must be ordered. Throws ValidationError.
void validate_params(const EvoParams& params);

} // namespace evopatch::evolution
