#pragma once

#include <cstdint>
#include <vector>

#include "evopatch/nn/model.hpp"

namespace evopatch::nn {

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::int64_t params_checked = 0;
};

// Compares analytic gradients of the mean cross-entropy against central
// finite differences for every trainable parameter. Runs in eval mode
// (dropout off) so the loss is smooth in the weights. Relative error per
// parameter: |a - n| / max(1, |a|, |n|).
GradCheckResult grad_check(Model<double>& model, const std::vector<double>& x, int batch,
                           const std::vector<int>& labels, double fd_step = 1e-5);

} // namespace evopatch::nn
