#include "evopatch/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "evopatch/error.hpp"

namespace evopatch {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "evopatch.config/1";

} // namespace

RunConfig run_config_from_json(const json& j) {
    if (j.value("schema", kSchema) != kSchema) {
        throw ValidationError("config: expected schema " + std::string(kSchema));
    }
    RunConfig cfg;
    if (j.contains("classifier")) {
        const auto cls = j.at("classifier").get<std::string>();
        if (cls == "proxy") {
            cfg.proxy = true;
        } else if (cls == "cnn") {
            cfg.proxy = false;
        } else {
            throw ValidationError("config: classifier must be \"cnn\" or \"proxy\"");
        }
    }
    if (j.contains("evo")) {
        const auto& e = j.at("evo");
        auto& p = cfg.evo;
        p.population_size = e.value("population_size", p.population_size);
        p.tournament_size = e.value("tournament_size", p.tournament_size);
        p.crossover_pct = e.value("crossover_pct", p.crossover_pct);
        p.mutation_pct = e.value("mutation_pct", p.mutation_pct);
        p.generations = e.value("generations", p.generations);
        p.w_s = e.value("w_s", p.w_s);
        p.min_alpha = e.value("min_alpha", p.min_alpha);
        p.max_alpha = e.value("max_alpha", p.max_alpha);
        p.min_beta = e.value("min_beta", p.min_beta);
        p.max_beta = e.value("max_beta", p.max_beta);
        p.min_patches = e.value("min_patches", p.min_patches);
        p.max_patches = e.value("max_patches", p.max_patches);
    }
    evolution::validate_params(cfg.evo);
    if (j.contains("train")) {
        const auto& t = j.at("train");
        cfg.train.epochs = t.value("epochs", cfg.train.epochs);
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        if (t.contains("adam")) {
            const auto& a = t.at("adam");
            cfg.train.adam.learning_rate = a.value("learning_rate", cfg.train.adam.learning_rate);
            cfg.train.adam.beta1 = a.value("beta1", cfg.train.adam.beta1);
            cfg.train.adam.beta2 = a.value("beta2", cfg.train.adam.beta2);
            cfg.train.adam.epsilon = a.value("epsilon", cfg.train.adam.epsilon);
        }
        if (cfg.train.epochs < 1 || cfg.train.batch_size < 1) {
            throw ValidationError("config: train.epochs and train.batch_size must be >= 1");
        }
    }
    if (j.contains("model")) {
        const auto& m = j.at("model");
        cfg.model.conv_filters = m.value("conv_filters", cfg.model.conv_filters);
        cfg.model.kernel = m.value("kernel", cfg.model.kernel);
        cfg.model.pool = m.value("pool", cfg.model.pool);
        cfg.model.conv_dropout = m.value("conv_dropout", cfg.model.conv_dropout);
        cfg.model.dense_units = m.value("dense_units", cfg.model.dense_units);
        cfg.model.dense_dropout = m.value("dense_dropout", cfg.model.dense_dropout);
    }
    if (j.contains("baseline")) {
        cfg.baseline_runs = j.at("baseline").value("r_runs", cfg.baseline_runs);
        if (cfg.baseline_runs < 1) {
            throw ValidationError("config: baseline.r_runs must be >= 1");
        }
    }
    if (j.contains("augment")) {
        const auto& a = j.at("augment");
        cfg.augment_train = a.value("enabled", cfg.augment_train);
        cfg.augment.blur_sigmas = a.value("blur_sigmas", cfg.augment.blur_sigmas);
        cfg.augment.noise_sigmas = a.value("noise_sigmas", cfg.augment.noise_sigmas);
        cfg.augment.rotations_deg = a.value("rotations_deg", cfg.augment.rotations_deg);
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        cfg.test_frac = s.value("test_frac", cfg.test_frac);
        cfg.val_frac = s.value("val_frac", cfg.val_frac);
    }
    return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
    const auto& p = cfg.evo;
    return json{
        {"schema", kSchema},
        {"classifier", cfg.proxy ? "proxy" : "cnn"},
        {"evo",
         {{"population_size", p.population_size},
          {"tournament_size", p.tournament_size},
          {"crossover_pct", p.crossover_pct},
          {"mutation_pct", p.mutation_pct},
          {"generations", p.generations},
          {"w_s", p.w_s},
          {"min_alpha", p.min_alpha},
          {"max_alpha", p.max_alpha},
          {"min_beta", p.min_beta},
          {"max_beta", p.max_beta},
          {"min_patches", p.min_patches},
          {"max_patches", p.max_patches}}},
        {"train",
         {{"epochs", cfg.train.epochs},
          {"batch_size", cfg.train.batch_size},
          {"adam",
           {{"learning_rate", cfg.train.adam.learning_rate},
            {"beta1", cfg.train.adam.beta1},
            {"beta2", cfg.train.adam.beta2},
            {"epsilon", cfg.train.adam.epsilon}}}}},
        {"model",
         {{"conv_filters", cfg.model.conv_filters},
          {"kernel", cfg.model.kernel},
          {"pool", cfg.model.pool},
          {"conv_dropout", cfg.model.conv_dropout},
          {"dense_units", cfg.model.dense_units},
          {"dense_dropout", cfg.model.dense_dropout}}},
        {"baseline", {{"r_runs", cfg.baseline_runs}}},
        {"augment",
         {{"enabled", cfg.augment_train},
          {"blur_sigmas", cfg.augment.blur_sigmas},
          {"noise_sigmas", cfg.augment.noise_sigmas},
          {"rotations_deg", cfg.augment.rotations_deg}}},
        {"split", {{"test_frac", cfg.test_frac}, {"val_frac", cfg.val_frac}}}};
}

RunConfig load_run_config(const std::string& path) {
    if (path.empty()) {
        return RunConfig{};
    }
    std::ifstream is(path);
    if (!is) {
        throw ValidationError("cannot open config: " + path);
    }
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ValidationError("config " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace evopatch
