#include "evopatch/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "evopatch/error.hpp"
#include "evopatch/rng.hpp"

namespace evopatch::data {

using nlohmann::json;

SplitPlan split_by_subject(const std::vector<imaging::GrayImage>& images, double test_frac,
                           double val_frac, std::uint64_t seed) {
    if (test_frac <= 0.0 || test_frac >= 1.0 || val_frac <= 0.0 || val_frac >= 1.0) {
        throw ValidationError("split: fractions must be in (0, 1)");
    }
    std::set<std::string> unique;
    for (const auto& img : images) {
        if (img.subject.empty()) {
            throw ValidationError("split: image without subject id");
        }
        unique.insert(img.subject);
    }
    std::vector<std::string> subjects(unique.begin(), unique.end());
    const auto n = static_cast<std::int64_t>(subjects.size());
    if (n < 3) {
        throw ValidationError("split: need at least 3 subjects, got " + std::to_string(n));
    }

    Rng rng(seed);
    rng.shuffle(subjects);

    const auto test_n =
        std::clamp<std::int64_t>(std::llround(static_cast<double>(n) * test_frac), 1, n - 2);
    const auto rem = n - test_n;
    const auto val_n =
        std::clamp<std::int64_t>(std::llround(static_cast<double>(rem) * val_frac), 1, rem - 1);

    SplitPlan plan;
    plan.test_frac = test_frac;
    plan.val_frac = val_frac;
    plan.seed = seed;
    plan.test_subjects.assign(subjects.begin(), subjects.begin() + test_n);
    plan.val_subjects.assign(subjects.begin() + test_n, subjects.begin() + test_n + val_n);
    plan.train_subjects.assign(subjects.begin() + test_n + val_n, subjects.end());
    return plan;
}

SplitIndices apply_split(const std::vector<imaging::GrayImage>& images, const SplitPlan& plan) {
    enum class Part { train, val, test };
    std::unordered_map<std::string, Part> where;
    for (const auto& s : plan.train_subjects) where[s] = Part::train;
    for (const auto& s : plan.val_subjects) {
        if (!where.emplace(s, Part::val).second) {
            throw ValidationError("split: subject in more than one partition: " + s);
        }
    }
    for (const auto& s : plan.test_subjects) {
        if (!where.emplace(s, Part::test).second) {
            throw ValidationError("split: subject in more than one partition: " + s);
        }
    }

    SplitIndices idx;
    for (size_t i = 0; i < images.size(); ++i) {
        const auto it = where.find(images[i].subject);
        if (it == where.end()) {
            throw ValidationError("split: subject not covered by plan: " + images[i].subject);
        }
        switch (it->second) {
            case Part::train: idx.train.push_back(static_cast<int>(i)); break;
            case Part::val: idx.val.push_back(static_cast<int>(i)); break;
            case Part::test: idx.test.push_back(static_cast<int>(i)); break;
        }
    }
    if (idx.train.empty() || idx.val.empty() || idx.test.empty()) {
        throw ValidationError("split: a partition received no images");
    }
    return idx;
}

json split_plan_to_json(const SplitPlan& plan) {
    return json{{"train_subjects", plan.train_subjects}, {"val_subjects", plan.val_subjects},
                {"test_subjects", plan.test_subjects},   {"test_frac", plan.test_frac},
                {"val_frac", plan.val_frac},             {"seed", plan.seed}};
}

SplitPlan split_plan_from_json(const json& j) {
    SplitPlan plan;
    plan.train_subjects = j.at("train_subjects").get<std::vector<std::string>>();
    plan.val_subjects = j.at("val_subjects").get<std::vector<std::string>>();
    plan.test_subjects = j.at("test_subjects").get<std::vector<std::string>>();
    plan.test_frac = j.at("test_frac").get<double>();
    plan.val_frac = j.at("val_frac").get<double>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    return plan;
}

} // namespace evopatch::data
