#include "evopatch/evolution/fitness.hpp"

#include <cmath>
#include <sstream>

#include "evopatch/error.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::evolution {

double fitness_score(double w_s, double s_c, double s_b, std::int64_t p_c, std::int64_t p_b) {
    if (s_b <= 0.0) {
        throw ValidationError("fitness: baseline accuracy must be positive");
    }
    if (p_b < 1) {
        throw ValidationError("fitness: baseline parameter count must be >= 1");
    }
    const double accuracy_term = w_s * (s_c / s_b);
    const double reduction_term =
        static_cast<double>(p_b - p_c) / static_cast<double>(p_b);
    return std::exp(accuracy_term + reduction_term);
}

double fitness_score_rounded2(double w_s, double s_c, double s_b, std::int64_t p_c,
                              std::int64_t p_b) {
    if (s_b <= 0.0) {
        throw ValidationError("fitness: baseline accuracy must be positive");
    }
    if (p_b < 1) {
        throw ValidationError("fitness: baseline parameter count must be >= 1");
    }
    const auto round2 = [](double v) { return std::round(v * 100.0) / 100.0; };
    const double accuracy_ratio = round2(s_c / s_b);
    const double reduction_term =
        round2(static_cast<double>(p_b - p_c) / static_cast<double>(p_b));
    return std::exp(w_s * accuracy_ratio + reduction_term);
}

bool FitnessCache::lookup(const std::string& signature, FitnessRecord& out) const {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = records_.find(signature);
    if (it == records_.end()) {
        return false;
    }
    out = it->second;
    return true;
}

void FitnessCache::store(const std::string& signature, const FitnessRecord& record) {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.emplace(signature, record);
}

std::size_t FitnessCache::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_.size();
}

FitnessRecord evaluate_fitness(const geometry::Chromosome& c, const EvalContext& ctx) {
    if (ctx.datasets == nullptr) {
        throw ValidationError("evaluate_fitness: no datasets");
    }
    const std::string signature = geometry::chromosome_signature(c);
    if (ctx.cache != nullptr) {
        FitnessRecord hit;
        if (ctx.cache->lookup(signature, hit)) {
            return hit;
        }
    }

    FitnessRecord record;
    record.chromosome = c;
    record.train_seed = Rng::derive(ctx.run_seed, signature);

    const data::StackedSet train = data::to_patch_samples(ctx.datasets->train, c);
    const data::StackedSet val = data::to_patch_samples(ctx.datasets->val, c);
    const int num_classes = ctx.datasets->num_classes;

    // Parameter arithmetic always describes the configured CNN on this input
    // shape, whether or not the proxy stands in for accuracy.
    record.p_c = nn::count_parameters(nn::default_cnn_layers(ctx.model_config, num_classes),
                                      train.shape);

    const auto layers = ctx.proxy ? nn::logreg_layers(num_classes)
                                  : nn::default_cnn_layers(ctx.model_config, num_classes);
    try {
        nn::Model<float> model(train.shape, layers, Rng::derive(record.train_seed, "init"));
        const nn::TrainResult result = nn::train(model, train.samples, val.samples,
                                                 ctx.train_config,
                                                 Rng::derive(record.train_seed, "train"));
        record.s_c = result.val_accuracy;
        record.fitness =
            fitness_score(ctx.w_s, record.s_c, ctx.baseline.s_b, record.p_c, ctx.baseline.p_b);
    } catch (const TrainingDiverged&) {
        record.s_c = 0.0;
        record.fitness = 0.0;
        record.error = true;
    }

    if (ctx.cache != nullptr) {
        ctx.cache->store(signature, record);
    }
    return record;
}

BaselineResult compute_baseline(const data::Datasets& datasets, const nn::ModelConfig& model_cfg,
                                const nn::TrainConfig& train_cfg, int r_runs, bool proxy,
                                std::uint64_t seed) {
    if (r_runs < 1) {
        throw ValidationError("baseline: r_runs must be >= 1");
    }
    const data::StackedSet train = data::to_full_samples(datasets.train);
    const data::StackedSet val = data::to_full_samples(datasets.val);
    const data::StackedSet test = data::to_full_samples(datasets.test);
    const int num_classes = datasets.num_classes;

    Baseline baseline;
    baseline.r_runs = r_runs;
    baseline.model_config = model_cfg;
    baseline.p_b =
        nn::count_parameters(nn::default_cnn_layers(model_cfg, num_classes), train.shape);

    const auto layers = proxy ? nn::logreg_layers(num_classes)
                              : nn::default_cnn_layers(model_cfg, num_classes);

    double val_sum = 0.0;
    double test_sum = 0.0;
    int best_run = -1;
    nn::Model<float>* best_model = nullptr;
    std::vector<nn::Model<float>> models;
    models.reserve(static_cast<size_t>(r_runs));
    for (int r = 0; r < r_runs; ++r) {
        models.emplace_back(train.shape, layers,
                            Rng::derive(seed, "baseline-init", static_cast<std::uint64_t>(r)));
        auto& model = models.back();
        try {
            const nn::TrainResult result =
                nn::train(model, train.samples, val.samples, train_cfg,
                          Rng::derive(seed, "baseline-train", static_cast<std::uint64_t>(r)));
            baseline.run_val_accuracies.push_back(result.val_accuracy);
            val_sum += result.val_accuracy;
            test_sum += nn::evaluate_accuracy(model, test.samples);
        } catch (const TrainingDiverged& e) {
            std::ostringstream msg;
            msg << "baseline run " << r << " of " << r_runs << " diverged: " << e.what();
            throw TrainingDiverged(msg.str());
        }
        if (best_run < 0 ||
            baseline.run_val_accuracies.back() > baseline.run_val_accuracies[best_run]) {
            best_run = r;
            best_model = &model;
        }
    }
    baseline.s_b = val_sum / r_runs;
    baseline.test_accuracy = test_sum / r_runs;
    if (baseline.s_b <= 0.0) {
        throw ValidationError(
            "baseline: validation accuracy is 0 across all runs; fitness anchoring needs s_b > 0");
    }
    return BaselineResult{std::move(baseline), std::move(*best_model)};
}

} // namespace evopatch::evolution
