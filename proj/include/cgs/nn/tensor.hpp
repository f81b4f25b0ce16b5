#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgs::nn {

class ShapeMismatch : public std::runtime_error {
public:
    ShapeMismatch(const std::string& what, const std::vector<int>& a, const std::vector<int>& b)
        : std::runtime_error("shape mismatch in " + what + ": " + shape_str(a) + " vs " +
                             shape_str(b)) {}

    static std::string shape_str(const std::vector<int>& shape) {
        std::string s = "[";
        for (size_t i = 0; i < shape.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(shape[i]);
        }
        return s + "]";
    }
};

class DegenerateVector : public std::runtime_error {
public:
    explicit DegenerateVector(double norm)
        : std::runtime_error("degenerate vector: norm " + std::to_string(norm) + " below 1e-12") {}
};

class IndexOutOfRange : public std::runtime_error {
public:
    IndexOutOfRange(int index, int size)
        : std::runtime_error("index " + std::to_string(index) + " out of range [0, " +
                             std::to_string(size) + ")") {}
};

// Row-major dense tensor of doubles.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::vector<int> shape_, std::vector<double> data_)
        : shape(std::move(shape_)), data(std::move(data_)) {}

    static Tensor zeros(std::vector<int> shape) {
        size_t n = 1;
        for (int d : shape) n *= static_cast<size_t>(d);
        return Tensor(std::move(shape), std::vector<double>(n, 0.0));
    }
    static Tensor vector(std::vector<double> values) {
        int n = static_cast<int>(values.size());
        return Tensor({n}, std::move(values));
    }
    static Tensor scalar(double v) { return Tensor({1}, {v}); }

    int rank() const { return static_cast<int>(shape.size()); }
    int rows() const { return shape.empty() ? 0 : shape[0]; }
    int cols() const { return shape.size() < 2 ? 0 : shape[1]; }
    size_t size() const { return data.size(); }

    double& at(int i) { return data[static_cast<size_t>(i)]; }
    double at(int i) const { return data[static_cast<size_t>(i)]; }
    double& at(int r, int c) { return data[static_cast<size_t>(r) * shape[1] + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * shape[1] + c]; }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

// Named learnable tensors; std::map gives name-sorted iteration.
using ParamStore = std::map<std::string, Tensor>;

// Plain (non-differentiable) similarity used on the evaluation path.
// Throws DegenerateVector when either norm is below 1e-12.
double cosine_similarity(const Tensor& u, const Tensor& v);

// Ranking-safe variant: degenerate vectors score -2 (below any cosine).
double cosine_or_floor(const Tensor& u, const Tensor& v);

}  // namespace cgs::nn
