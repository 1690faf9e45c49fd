#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "evopatch/data/dataset.hpp"
#include "evopatch/evolution/params.hpp"
#include "evopatch/geometry.hpp"
#include "evopatch/nn/model.hpp"
#include "evopatch/nn/train.hpp"

namespace evopatch::evolution {

// exp(w_s * (s_c / s_b) + (p_b - p_c) / p_b), full floating precision.
double fitness_score(double w_s, double s_c, double s_b, std::int64_t p_c, std::int64_t p_b);

// Same formula with both intermediate terms rounded to 2 decimals first,
// the presentation used in the reference worked example. Kept for the oracle
// test only; nothing in the pipeline uses it.
double fitness_score_rounded2(double w_s, double s_c, double s_b, std::int64_t p_c,
                              std::int64_t p_b);

// Anchors of the fitness function: mean validation accuracy of the
// full-image model over r_runs and its trainable-parameter count.
struct Baseline {
    double s_b = 0.0;
    std::int64_t p_b = 0;
    int r_runs = 0;
    double test_accuracy = 0.0; // mean over runs; reporting only
    std::vector<double> run_val_accuracies;
    nn::ModelConfig model_config;
};

struct FitnessRecord {
    geometry::Chromosome chromosome;
    double s_c = 0.0;
    std::int64_t p_c = 0;
    double fitness = 0.0;
    bool error = false; // training diverged; fitness forced to 0
    std::uint64_t train_seed = 0;
};

// Signature-keyed memo; safe for concurrent insert/lookup. Evaluations are
// deterministic per signature, so whichever thread computes first wins and
// every later lookup sees an identical record.
class FitnessCache {
public:
    bool lookup(const std::string& signature, FitnessRecord& out) const;
    void store(const std::string& signature, const FitnessRecord& record);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::unordered_map<std::string, FitnessRecord> records_;
};

// Everything a chromosome evaluation needs. With proxy=true the accuracy
// comes from a logistic-regression stand-in (fast test mode), but p_c is
// still the configured CNN's parameter arithmetic, so fitness and reduction
// figures describe the same architecture in both modes.
struct EvalContext {
    const data::Datasets* datasets = nullptr;
    Baseline baseline;
    nn::TrainConfig train_config;
    nn::ModelConfig model_config;
    bool proxy = false;
    double w_s = 5.0;
    std::uint64_t run_seed = 0;
    FitnessCache* cache = nullptr;
};

// Stack patches per the chromosome, train, score. The training seed is
// derived from (run_seed, chromosome signature): permuting genes hits the
// same cache slot and the same seed, so caching never changes results.
FitnessRecord evaluate_fitness(const geometry::Chromosome& c, const EvalContext& ctx);

// Train the full-image model r_runs times on distinct derived seeds.
// Returns the baseline plus the model of the best-validation run (ties to
// the earliest run). Divergence in any run aborts with the run named.
struct BaselineResult {
    Baseline baseline;
    nn::Model<float> model;
};

BaselineResult compute_baseline(const data::Datasets& datasets, const nn::ModelConfig& model_cfg,
                                const nn::TrainConfig& train_cfg, int r_runs, bool proxy,
                                std::uint64_t seed);

} // namespace evopatch::evolution
