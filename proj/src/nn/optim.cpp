#include "cgs/nn/optim.hpp"

#include <cmath>

namespace cgs::nn {

void adam_step(ParamStore& params, const ParamStore& grads, OptimizerState& state) {
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (auto& [name, param] : params) {
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        const Tensor& g = git->second;
        if (!g.same_shape(param)) throw ShapeMismatch("adam_step " + name, param.shape, g.shape);
        Tensor& m = state.first_moment.try_emplace(name, Tensor::zeros(param.shape)).first->second;
        Tensor& v = state.second_moment.try_emplace(name, Tensor::zeros(param.shape)).first->second;
        for (size_t i = 0; i < param.size(); ++i) {
            m.data[i] = state.beta1 * m.data[i] + (1.0 - state.beta1) * g.data[i];
            v.data[i] = state.beta2 * v.data[i] + (1.0 - state.beta2) * g.data[i] * g.data[i];
            double mh = m.data[i] / bc1;
            double vh = v.data[i] / bc2;
            param.data[i] -= state.learning_rate * mh / (std::sqrt(vh) + state.epsilon);
        }
    }
}

}  // namespace cgs::nn
