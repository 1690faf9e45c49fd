#include "evopatch/evolution/engine.hpp"

#include <exception>

#include "evopatch/error.hpp"

namespace evopatch::evolution {

namespace {

// Parallel map with exception transport; OpenMP regions must not leak
// throws.
std::vector<FitnessRecord> evaluate_all(const std::vector<Chromosome>& members,
                                        const Evaluator& evaluate) {
    std::vector<FitnessRecord> records(members.size());
    std::exception_ptr failure = nullptr;
    const long n = static_cast<long>(members.size());
#pragma omp parallel for schedule(dynamic) if (n > 1)
    for (long i = 0; i < n; ++i) {
        try {
            records[static_cast<size_t>(i)] = evaluate(members[static_cast<size_t>(i)]);
        } catch (...) {
#pragma omp critical(evopatch_evaluate_all)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

int best_index(const std::vector<FitnessRecord>& records) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(records.size()); ++i) {
        if (records[static_cast<size_t>(i)].fitness > records[static_cast<size_t>(best)].fitness) {
            best = i;
        }
    }
    return best;
}

GenerationStats stats_of(int generation, const std::vector<FitnessRecord>& records) {
    GenerationStats stats;
    stats.generation = generation;
    const int best = best_index(records);
    stats.best_fitness = records[static_cast<size_t>(best)].fitness;
    stats.best_s = records[static_cast<size_t>(best)].s_c;
    stats.best_params = records[static_cast<size_t>(best)].p_c;
    double sum = 0.0;
    for (const auto& r : records) sum += r.fitness;
    stats.mean_fitness = sum / static_cast<double>(records.size());
    return stats;
}

} // namespace

EvolveResult evolve(const EvoParams& params, const Extent2i& image_dims,
                    const Evaluator& evaluate, std::uint64_t seed) {
    validate_params(params);
    const int pop_size = params.population_size;

    std::vector<Chromosome> population(static_cast<size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) {
        Rng rng(Rng::derive(seed, "init", static_cast<std::uint64_t>(i)));
        population[static_cast<size_t>(i)] = create_chromosome(params, image_dims, rng);
    }
    std::vector<FitnessRecord> records = evaluate_all(population, evaluate);

    EvolveResult result;
    result.history.push_back(stats_of(0, records));
    result.best = records[static_cast<size_t>(best_index(records))];

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::vector<double> fitness(static_cast<size_t>(pop_size));
        for (int i = 0; i < pop_size; ++i) {
            fitness[static_cast<size_t>(i)] = records[static_cast<size_t>(i)].fitness;
        }

        std::vector<Chromosome> next(static_cast<size_t>(pop_size));
        next[0] = population[static_cast<size_t>(best_index(records))];

        // Slot decisions are sequential and cheap; candidate evaluation is
        // the expensive part and runs batched below.
        struct PendingPair {
            int slot;
            Chromosome c1, c2;
        };
        std::vector<PendingPair> pending;
        const std::uint64_t gen_seed = Rng::derive(seed, "gen", static_cast<std::uint64_t>(gen));
        for (int i = 1; i < pop_size; ++i) {
            Rng rng(Rng::derive(gen_seed, "slot", static_cast<std::uint64_t>(i)));
            const bool cross = rng.uniform01() < params.crossover_pct / 100.0;
            if (cross) {
                const int a = tournament_select(fitness, params.tournament_size, rng);
                const int b = tournament_select(fitness, params.tournament_size, rng);
                auto [c1, c2] = crossover_offspring(population[static_cast<size_t>(a)],
                                                    population[static_cast<size_t>(b)], rng);
                pending.push_back(PendingPair{i, std::move(c1), std::move(c2)});
            } else {
                const int a = tournament_select(fitness, params.tournament_size, rng);
                next[static_cast<size_t>(i)] =
                    mutate(population[static_cast<size_t>(a)], params, image_dims, rng);
            }
        }

        if (!pending.empty()) {
            std::vector<Chromosome> candidates;
            candidates.reserve(pending.size() * 2);
            for (const auto& p : pending) {
                candidates.push_back(p.c1);
                candidates.push_back(p.c2);
            }
            const std::vector<FitnessRecord> cand_records = evaluate_all(candidates, evaluate);
            for (size_t j = 0; j < pending.size(); ++j) {
                const auto& r1 = cand_records[2 * j];
                const auto& r2 = cand_records[2 * j + 1];
                next[static_cast<size_t>(pending[j].slot)] =
                    r1.fitness >= r2.fitness ? pending[j].c1 : pending[j].c2;
            }
        }

        population = std::move(next);
        records = evaluate_all(population, evaluate);
        result.history.push_back(stats_of(gen, records));
        const auto& gen_best = records[static_cast<size_t>(best_index(records))];
        if (gen_best.fitness > result.best.fitness) {
            result.best = gen_best;
        }
    }
    return result;
}

} // namespace evopatch::evolution
