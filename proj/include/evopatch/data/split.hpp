#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "evopatch/imaging.hpp"

namespace evopatch::data {

// Subject-level partition. Images never cross partitions because subjects
// do not; augmented variants inherit their source's subject and therefore
// its partition.
struct SplitPlan {
    std::vector<std::string> train_subjects;
    std::vector<std::string> val_subjects;
    std::vector<std::string> test_subjects;
    double test_frac = 0.30;
    double val_frac = 0.20;
    std::uint64_t seed = 0;
};

// Shuffle the sorted subject list with the seed, take round(n * test_frac)
// subjects for test (at least 1, at most n - 2), then round(rem * val_frac)
// of the remainder for validation (at least 1, leaving at least 1 for
// train). Throws ValidationError with fewer than 3 subjects.
SplitPlan split_by_subject(const std::vector<imaging::GrayImage>& images, double test_frac,
                           double val_frac, std::uint64_t seed);

// Image indices per partition, in manifest order.
struct SplitIndices {
    std::vector<int> train;
    std::vector<int> val;
    std::vector<int> test;
};

SplitIndices apply_split(const std::vector<imaging::GrayImage>& images, const SplitPlan& plan);

nlohmann::json split_plan_to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const nlohmann::json& j);

} // namespace evopatch::data
