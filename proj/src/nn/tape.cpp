#include "cgs/nn/tape.hpp"

#include <algorithm>
#include <cmath>

namespace cgs::nn {

namespace {

void require_same_shape(const char* what, const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw ShapeMismatch(what, a.shape, b.shape);
}

void require_rank1(const char* what, const Tensor& t) {
    if (t.rank() != 1) throw ShapeMismatch(what, t.shape, {-1});
}

}  // namespace

double cosine_similarity(const Tensor& u, const Tensor& v) {
    require_same_shape("cosine_similarity", u, v);
    double uu = 0, vv = 0, uv = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        uu += u.data[i] * u.data[i];
        vv += v.data[i] * v.data[i];
        uv += u.data[i] * v.data[i];
    }
    double nu = std::sqrt(uu), nv = std::sqrt(vv);
    if (nu < 1e-12) throw DegenerateVector(nu);
    if (nv < 1e-12) throw DegenerateVector(nv);
    return uv / (nu * nv);
}

double cosine_or_floor(const Tensor& u, const Tensor& v) {
    double uu = 0, vv = 0, uv = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        uu += u.data[i] * u.data[i];
        vv += v.data[i] * v.data[i];
        uv += u.data[i] * v.data[i];
    }
    double nu = std::sqrt(uu), nv = std::sqrt(vv);
    if (nu < 1e-12 || nv < 1e-12) return -2.0;
    return uv / (nu * nv);
}

Tape::Id Tape::push(Tensor value, std::function<void(Tape&)> backprop) {
    Node node;
    node.grad = Tensor::zeros(value.shape);
    node.value = std::move(value);
    node.backprop = std::move(backprop);
    nodes_.push_back(std::move(node));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(Tensor value) { return push(std::move(value), nullptr); }

Tape::Id Tape::add(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    require_same_shape("add", va, vb);
    Tensor out = va;
    for (size_t i = 0; i < out.size(); ++i) out.data[i] += vb.data[i];
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, b, id](Tape& t) {
        const Tensor& g = t.grad(id);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (size_t i = 0; i < g.size(); ++i) {
            ga.data[i] += g.data[i];
            gb.data[i] += g.data[i];
        }
    };
    return id;
}

Tape::Id Tape::mul(Id a, Id b) {
    const Tensor& va = value(a);
    const Tensor& vb = value(b);
    require_same_shape("mul", va, vb);
    Tensor out = va;
    for (size_t i = 0; i < out.size(); ++i) out.data[i] *= vb.data[i];
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, b, id](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& va = t.value(a);
        const Tensor& vb = t.value(b);
        Tensor& ga = t.grad_mut(a);
        Tensor& gb = t.grad_mut(b);
        for (size_t i = 0; i < g.size(); ++i) {
            ga.data[i] += g.data[i] * vb.data[i];
            gb.data[i] += g.data[i] * va.data[i];
        }
    };
    return id;
}

Tape::Id Tape::scale(Id a, double c) {
    Tensor out = value(a);
    for (double& x : out.data) x *= c;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, c, id](Tape& t) {
        const Tensor& g = t.grad(id);
        Tensor& ga = t.grad_mut(a);
        for (size_t i = 0; i < g.size(); ++i) ga.data[i] += c * g.data[i];
    };
    return id;
}

Tape::Id Tape::tanh_op(Id a) {
    Tensor out = value(a);
    for (double& x : out.data) x = std::tanh(x);
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, id](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& y = t.value(id);
        Tensor& ga = t.grad_mut(a);
        for (size_t i = 0; i < g.size(); ++i)
            ga.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
    };
    return id;
}

Tape::Id Tape::sigmoid_op(Id a) {
    Tensor out = value(a);
    for (double& x : out.data) x = 1.0 / (1.0 + std::exp(-x));
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, id](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& y = t.value(id);
        Tensor& ga = t.grad_mut(a);
        for (size_t i = 0; i < g.size(); ++i)
            ga.data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
    };
    return id;
}

Tape::Id Tape::leaky_relu(Id a, double slope) {
    Tensor out = value(a);
    for (double& x : out.data) x = x >= 0.0 ? x : slope * x;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, slope, id](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& x = t.value(a);
        Tensor& ga = t.grad_mut(a);
        for (size_t i = 0; i < g.size(); ++i)
            ga.data[i] += g.data[i] * (x.data[i] >= 0.0 ? 1.0 : slope);
    };
    return id;
}

Tape::Id Tape::matmul(Id a, Id b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (A.rank() != 2) throw ShapeMismatch("matmul lhs", A.shape, {-1, -1});
    const int m = A.shape[0];
    const int n = A.shape[1];
    if (B.rank() == 1) {
        if (B.shape[0] != n) throw ShapeMismatch("matmul", A.shape, B.shape);
        Tensor out = Tensor::zeros({m});
        for (int r = 0; r < m; ++r) {
            double acc = 0.0;
            for (int c = 0; c < n; ++c) acc += A.at(r, c) * B.at(c);
            out.at(r) = acc;
        }
        Id id = push(std::move(out), nullptr);
        nodes_.back().backprop = [a, b, id, m, n](Tape& t) {
            const Tensor& g = t.grad(id);
            const Tensor& A = t.value(a);
            const Tensor& B = t.value(b);
            Tensor& gA = t.grad_mut(a);
            Tensor& gB = t.grad_mut(b);
            for (int r = 0; r < m; ++r) {
                double gr = g.at(r);
                for (int c = 0; c < n; ++c) {
                    gA.at(r, c) += gr * B.at(c);
                    gB.at(c) += gr * A.at(r, c);
                }
            }
        };
        return id;
    }
    if (B.rank() != 2 || B.shape[0] != n) throw ShapeMismatch("matmul", A.shape, B.shape);
    const int k = B.shape[1];
    Tensor out = Tensor::zeros({m, k});
    for (int r = 0; r < m; ++r)
        for (int j = 0; j < n; ++j) {
            double arj = A.at(r, j);
            for (int c = 0; c < k; ++c) out.at(r, c) += arj * B.at(j, c);
        }
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [a, b, id, m, n, k](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& A = t.value(a);
        const Tensor& B = t.value(b);
        Tensor& gA = t.grad_mut(a);
        Tensor& gB = t.grad_mut(b);
        for (int r = 0; r < m; ++r)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int c = 0; c < k; ++c) {
                    acc += g.at(r, c) * B.at(j, c);
                    gB.at(j, c) += g.at(r, c) * A.at(r, j);
                }
                gA.at(r, j) += acc;
            }
    };
    return id;
}

Tape::Id Tape::dot(Id u, Id v) {
    const Tensor& a = value(u);
    const Tensor& b = value(v);
    require_rank1("dot", a);
    require_same_shape("dot", a, b);
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a.data[i] * b.data[i];
    Id id = push(Tensor::scalar(acc), nullptr);
    nodes_.back().backprop = [u, v, id](Tape& t) {
        double g = t.grad(id).at(0);
        const Tensor& a = t.value(u);
        const Tensor& b = t.value(v);
        Tensor& ga = t.grad_mut(u);
        Tensor& gb = t.grad_mut(v);
        for (size_t i = 0; i < a.size(); ++i) {
            ga.data[i] += g * b.data[i];
            gb.data[i] += g * a.data[i];
        }
    };
    return id;
}

Tape::Id Tape::scalar_mul(Id s, Id v) {
    const Tensor& sv = value(s);
    if (sv.size() != 1) throw ShapeMismatch("scalar_mul scalar", sv.shape, {1});
    const Tensor& t0 = value(v);
    Tensor out = t0;
    double c = sv.at(0);
    for (double& x : out.data) x *= c;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [s, v, id](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& tv = t.value(v);
        double c = t.value(s).at(0);
        Tensor& gs = t.grad_mut(s);
        Tensor& gv = t.grad_mut(v);
        for (size_t i = 0; i < g.size(); ++i) {
            gs.data[0] += g.data[i] * tv.data[i];
            gv.data[i] += g.data[i] * c;
        }
    };
    return id;
}

Tape::Id Tape::sum_all(Id a) {
    const Tensor& va = value(a);
    double acc = 0.0;
    for (double x : va.data) acc += x;
    Id id = push(Tensor::scalar(acc), nullptr);
    nodes_.back().backprop = [a, id](Tape& t) {
        double g = t.grad(id).at(0);
        Tensor& ga = t.grad_mut(a);
        for (double& x : ga.data) x += g;
    };
    return id;
}

Tape::Id Tape::row(Id matrix, int r) {
    const Tensor& M = value(matrix);
    if (M.rank() != 2) throw ShapeMismatch("row", M.shape, {-1, -1});
    if (r < 0 || r >= M.shape[0]) throw IndexOutOfRange(r, M.shape[0]);
    const int n = M.shape[1];
    Tensor out = Tensor::zeros({n});
    for (int c = 0; c < n; ++c) out.at(c) = M.at(r, c);
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [matrix, r, n, id](Tape& t) {
        const Tensor& g = t.grad(id);
        Tensor& gM = t.grad_mut(matrix);
        for (int c = 0; c < n; ++c) gM.at(r, c) += g.at(c);
    };
    return id;
}

Tape::Id Tape::element(Id vec, int i) {
    const Tensor& v = value(vec);
    require_rank1("element", v);
    if (i < 0 || i >= v.shape[0]) throw IndexOutOfRange(i, v.shape[0]);
    Id id = push(Tensor::scalar(v.at(i)), nullptr);
    nodes_.back().backprop = [vec, i, id](Tape& t) {
        t.grad_mut(vec).at(i) += t.grad(id).at(0);
    };
    return id;
}

Tape::Id Tape::stack(const std::vector<Id>& scalars) {
    Tensor out = Tensor::zeros({static_cast<int>(scalars.size())});
    for (size_t i = 0; i < scalars.size(); ++i) {
        const Tensor& s = value(scalars[i]);
        if (s.size() != 1) throw ShapeMismatch("stack", s.shape, {1});
        out.at(static_cast<int>(i)) = s.at(0);
    }
    Id id = push(std::move(out), nullptr);
    std::vector<Id> parts = scalars;
    nodes_.back().backprop = [parts, id](Tape& t) {
        const Tensor& g = t.grad(id);
        for (size_t i = 0; i < parts.size(); ++i)
            t.grad_mut(parts[i]).at(0) += g.at(static_cast<int>(i));
    };
    return id;
}

Tape::Id Tape::stack_rows(const std::vector<Id>& rows) {
    if (rows.empty()) throw ShapeMismatch("stack_rows", {0}, {-1});
    const int n = value(rows[0]).shape[0];
    const int m = static_cast<int>(rows.size());
    Tensor out = Tensor::zeros({m, n});
    for (int r = 0; r < m; ++r) {
        const Tensor& v = value(rows[static_cast<size_t>(r)]);
        require_rank1("stack_rows", v);
        if (v.shape[0] != n) throw ShapeMismatch("stack_rows", {n}, v.shape);
        for (int c = 0; c < n; ++c) out.at(r, c) = v.at(c);
    }
    Id id = push(std::move(out), nullptr);
    std::vector<Id> parts = rows;
    nodes_.back().backprop = [parts, id, n](Tape& t) {
        const Tensor& g = t.grad(id);
        for (size_t r = 0; r < parts.size(); ++r) {
            Tensor& gr = t.grad_mut(parts[r]);
            for (int c = 0; c < n; ++c) gr.at(c) += g.at(static_cast<int>(r), c);
        }
    };
    return id;
}

Tape::Id Tape::mean_rows(Id matrix) {
    const Tensor& M = value(matrix);
    if (M.rank() != 2) throw ShapeMismatch("mean_rows", M.shape, {-1, -1});
    const int m = M.shape[0];
    const int n = M.shape[1];
    Tensor out = Tensor::zeros({n});
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) out.at(c) += M.at(r, c);
    for (int c = 0; c < n; ++c) out.at(c) /= m;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [matrix, id, m, n](Tape& t) {
        const Tensor& g = t.grad(id);
        Tensor& gM = t.grad_mut(matrix);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) gM.at(r, c) += g.at(c) / m;
    };
    return id;
}

Tape::Id Tape::gather_mean(Id matrix, std::vector<int> row_indices) {
    const Tensor& M = value(matrix);
    if (M.rank() != 2) throw ShapeMismatch("gather_mean", M.shape, {-1, -1});
    if (row_indices.empty()) throw IndexOutOfRange(0, 0);
    const int n = M.shape[1];
    for (int r : row_indices)
        if (r < 0 || r >= M.shape[0]) throw IndexOutOfRange(r, M.shape[0]);
    Tensor out = Tensor::zeros({n});
    for (int r : row_indices)
        for (int c = 0; c < n; ++c) out.at(c) += M.at(r, c);
    const double inv = 1.0 / static_cast<double>(row_indices.size());
    for (int c = 0; c < n; ++c) out.at(c) *= inv;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [matrix, id, n, inv, rows = std::move(row_indices)](Tape& t) {
        const Tensor& g = t.grad(id);
        Tensor& gM = t.grad_mut(matrix);
        for (int r : rows)
            for (int c = 0; c < n; ++c) gM.at(r, c) += g.at(c) * inv;
    };
    return id;
}

Tape::Id Tape::softmax_row(Id vec) {
    const Tensor& v = value(vec);
    require_rank1("softmax_row", v);
    const int n = v.shape[0];
    double mx = *std::max_element(v.data.begin(), v.data.end());
    Tensor out = Tensor::zeros({n});
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        out.at(i) = std::exp(v.at(i) - mx);
        z += out.at(i);
    }
    for (int i = 0; i < n; ++i) out.at(i) /= z;
    Id id = push(std::move(out), nullptr);
    nodes_.back().backprop = [vec, id, n](Tape& t) {
        const Tensor& g = t.grad(id);
        const Tensor& y = t.value(id);
        Tensor& gv = t.grad_mut(vec);
        double gy = 0.0;
        for (int i = 0; i < n; ++i) gy += g.at(i) * y.at(i);
        for (int i = 0; i < n; ++i) gv.at(i) += y.at(i) * (g.at(i) - gy);
    };
    return id;
}

Tape::Id Tape::softmax_cross_entropy_row(Id scores, int target) {
    const Tensor& s = value(scores);
    require_rank1("softmax_cross_entropy_row", s);
    const int n = s.shape[0];
    if (target < 0 || target >= n) throw IndexOutOfRange(target, n);
    double mx = *std::max_element(s.data.begin(), s.data.end());
    double z = 0.0;
    for (int i = 0; i < n; ++i) z += std::exp(s.at(i) - mx);
    double loss = std::log(z) - (s.at(target) - mx);
    Id id = push(Tensor::scalar(loss), nullptr);
    nodes_.back().backprop = [scores, target, id, n, mx, z](Tape& t) {
        double g = t.grad(id).at(0);
        const Tensor& s = t.value(scores);
        Tensor& gs = t.grad_mut(scores);
        for (int i = 0; i < n; ++i) {
            double p = std::exp(s.at(i) - mx) / z;
            gs.at(i) += g * (p - (i == target ? 1.0 : 0.0));
        }
    };
    return id;
}

Tape::Id Tape::cosine(Id u, Id v) {
    const Tensor& a = value(u);
    const Tensor& b = value(v);
    require_rank1("cosine", a);
    require_same_shape("cosine", a, b);
    double uu = 0, vv = 0, uv = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        uu += a.data[i] * a.data[i];
        vv += b.data[i] * b.data[i];
        uv += a.data[i] * b.data[i];
    }
    double nu = std::sqrt(uu), nv = std::sqrt(vv);
    if (nu < 1e-12) throw DegenerateVector(nu);
    if (nv < 1e-12) throw DegenerateVector(nv);
    double c = uv / (nu * nv);
    Id id = push(Tensor::scalar(c), nullptr);
    nodes_.back().backprop = [u, v, id, nu, nv, c](Tape& t) {
        double g = t.grad(id).at(0);
        const Tensor& a = t.value(u);
        const Tensor& b = t.value(v);
        Tensor& ga = t.grad_mut(u);
        Tensor& gb = t.grad_mut(v);
        for (size_t i = 0; i < a.size(); ++i) {
            ga.data[i] += g * (b.data[i] / (nu * nv) - c * a.data[i] / (nu * nu));
            gb.data[i] += g * (a.data[i] / (nu * nv) - c * b.data[i] / (nv * nv));
        }
    };
    return id;
}

void Tape::backward(Id loss) {
    Tensor& g = grad_mut(loss);
    if (g.size() != 1) throw ShapeMismatch("backward loss", value(loss).shape, {1});
    for (auto& node : nodes_) std::fill(node.grad.data.begin(), node.grad.data.end(), 0.0);
    g.at(0) = 1.0;
    for (size_t i = nodes_.size(); i-- > static_cast<size_t>(0);) {
        if (static_cast<Id>(i) > loss) continue;
        if (nodes_[i].backprop) nodes_[i].backprop(*this);
    }
}

}  // namespace cgs::nn
