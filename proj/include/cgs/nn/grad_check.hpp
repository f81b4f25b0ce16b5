#pragma once

#include <functional>

#include "cgs/nn/tensor.hpp"

namespace cgs::nn {

// Loss over a parameter store. When `grads` is non-null the callee must fill
// it with analytic gradients for every parameter it touches.
using LossFn = std::function<double(const ParamStore& params, ParamStore* grads)>;

// Max relative error between reverse-mode gradients and central finite
// differences over every parameter entry. Relative error denominator is
// max(1e-8, |analytic| + |numeric|).
double grad_check(const LossFn& loss_fn, ParamStore& params, double eps = 1e-5);

}  // namespace cgs::nn
