#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "evopatch/evolution/params.hpp"
#include "evopatch/imaging.hpp"
#include "evopatch/nn/layers.hpp"
#include "evopatch/nn/train.hpp"

namespace evopatch {

// One JSON file drives a whole run; every field has a default, so {} and a
// missing --config both mean the reference configuration. The "classifier"
// field ("cnn" or "proxy") picks the real model or the fast logistic
// stand-in.
struct RunConfig {
    evolution::EvoParams evo;
    nn::TrainConfig train;
    nn::ModelConfig model;
    int baseline_runs = 3;
    imaging::AugmentParams augment;
    bool augment_train = true;
    double test_frac = 0.30;
    double val_frac = 0.20;
    bool proxy = false;
};

RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json run_config_to_json(const RunConfig& cfg);

// Empty path returns the defaults.
RunConfig load_run_config(const std::string& path);

} // namespace evopatch
