#include "cgs/nn/grad_check.hpp"

#include <cmath>

namespace cgs::nn {

double grad_check(const LossFn& loss_fn, ParamStore& params, double eps) {
    ParamStore analytic;
    loss_fn(params, &analytic);

    double max_rel = 0.0;
    for (auto& [name, param] : params) {
        auto ait = analytic.find(name);
        for (size_t i = 0; i < param.size(); ++i) {
            double saved = param.data[i];
            param.data[i] = saved + eps;
            double f_plus = loss_fn(params, nullptr);
            param.data[i] = saved - eps;
            double f_minus = loss_fn(params, nullptr);
            param.data[i] = saved;

            double numeric = (f_plus - f_minus) / (2.0 * eps);
            double a = ait != analytic.end() ? ait->second.data[i] : 0.0;
            double rel = std::fabs(a - numeric) / std::max(1e-8, std::fabs(a) + std::fabs(numeric));
            if (rel > max_rel) max_rel = rel;
        }
    }
    return max_rel;
}

}  // namespace cgs::nn
