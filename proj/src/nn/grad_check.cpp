#include "evopatch/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "evopatch/nn/train.hpp"

namespace evopatch::nn {

GradCheckResult grad_check(Model<double>& model, const std::vector<double>& x, int batch,
                           const std::vector<int>& labels, double fd_step) {
    model.forward(x, batch, false, nullptr);
    model.zero_grads();
    model.backward(labels);

    const auto n = model.parameter_count();
    std::vector<double> analytic(static_cast<size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        analytic[static_cast<size_t>(i)] = model.grad_at(i);
    }

    GradCheckResult result;
    result.params_checked = n;
    for (std::int64_t i = 0; i < n; ++i) {
        const double saved = model.param_at(i);
        model.set_param_at(i, saved + fd_step);
        const double lo_plus =
            mean_nll(model.forward(x, batch, false, nullptr), labels, model.num_classes());
        model.set_param_at(i, saved - fd_step);
        const double lo_minus =
            mean_nll(model.forward(x, batch, false, nullptr), labels, model.num_classes());
        model.set_param_at(i, saved);

        const double numeric = (lo_plus - lo_minus) / (2.0 * fd_step);
        const double a = analytic[static_cast<size_t>(i)];
        const double rel =
            std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
        result.max_rel_err = std::max(result.max_rel_err, rel);
    }
    return result;
}

} // namespace evopatch::nn
