#include "dpad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpad/error.hpp"

namespace dpad::nn {
namespace {

std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Var& a, const Var& b, const char* op) {
    if (!a.value().same_shape(b.value())) {
        throw ValidationError(std::string(op) + ": shape mismatch " + shape_of(a.value()) +
                              " vs " + shape_of(b.value()));
    }
}

void require_column(const Var& x, const char* op) {
    if (x.cols() != 1 || x.rows() == 0) {
        throw ValidationError(std::string(op) + ": expected an n x 1 column, got " +
                              shape_of(x.value()));
    }
}

// Returns the parent's gradient buffer if it wants one, else nullptr.
Matrix* grad_of(Node& n, std::size_t i) {
    Node& p = *n.parents[i];
    return p.requires_grad ? &p.grad_buffer() : nullptr;
}

}  // namespace

Var add(const Var& a, const Var& b) {
    require_same_shape(a, b, "add");
    Matrix out = a.value();
    out += b.value();
    return make_result(std::move(out), {a, b}, [](Node& n) {
        for (std::size_t i = 0; i < 2; ++i) {
            if (Matrix* g = grad_of(n, i)) *g += n.grad;
        }
    });
}

Var sub(const Var& a, const Var& b) {
    require_same_shape(a, b, "sub");
    Matrix out = a.value();
    const auto bv = b.value().data();
    auto ov = out.data();
    for (std::size_t i = 0; i < ov.size(); ++i) ov[i] -= bv[i];
    return make_result(std::move(out), {a, b}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) *g += n.grad;
        if (Matrix* g = grad_of(n, 1)) {
            for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] -= n.grad[i];
        }
    });
}

Var mul(const Var& a, const Var& b) {
    require_same_shape(a, b, "mul");
    Matrix out = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b.value()[i];
    return make_result(std::move(out), {a, b}, [](Node& n) {
        const Matrix& av = n.parents[0]->value;
        const Matrix& bv = n.parents[1]->value;
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += n.grad[i] * bv[i];
        }
        if (Matrix* g = grad_of(n, 1)) {
            for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += n.grad[i] * av[i];
        }
    });
}

Var scale(const Var& a, double s) { return affine_const(a, s, 0.0); }

Var affine_const(const Var& x, double a, double b) {
    Matrix out = x.value();
    for (auto& v : out.storage()) v = a * v + b;
    return make_result(std::move(out), {x}, [a](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += a * n.grad[i];
        }
    });
}

Var matmul(const Var& a, const Var& b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matmul: inner dimensions differ (" + shape_of(a.value()) + " * " +
                              shape_of(b.value()) + ")");
    }
    Matrix out;
    matmul_into(a.value(), b.value(), out);
    return make_result(std::move(out), {a, b}, [](Node& n) {
        const Matrix& av = n.parents[0]->value;
        const Matrix& bv = n.parents[1]->value;
        Matrix tmp;
        if (Matrix* g = grad_of(n, 0)) {
            matmul_into(n.grad, bv.transposed(), tmp);
            *g += tmp;
        }
        if (Matrix* g = grad_of(n, 1)) {
            matmul_into(av.transposed(), n.grad, tmp);
            *g += tmp;
        }
    });
}

Var transpose(const Var& a) {
    return make_result(a.value().transposed(), {a}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) *g += n.grad.transposed();
    });
}

Var add_col_bias(const Var& x, const Var& b) {
    if (b.cols() != 1 || b.rows() != x.rows()) {
        throw ValidationError("add_col_bias: bias " + shape_of(b.value()) + " does not match " +
                              shape_of(x.value()));
    }
    Matrix out = x.value();
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += b.value()[r];
    }
    return make_result(std::move(out), {x, b}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) *g += n.grad;
        if (Matrix* g = grad_of(n, 1)) {
            for (std::size_t r = 0; r < n.grad.rows(); ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < n.grad.cols(); ++c) s += n.grad(r, c);
                (*g)[r] += s;
            }
        }
    });
}

Var linear(const Var& w, const Var& x, const Var& b) {
    if (w.cols() != x.rows()) {
        throw ValidationError("linear: weight " + shape_of(w.value()) + " cannot map input " +
                              shape_of(x.value()));
    }
    if (b.cols() != 1 || b.rows() != w.rows()) {
        throw ValidationError("linear: bias " + shape_of(b.value()) + " does not match weight " +
                              shape_of(w.value()));
    }
    Matrix out;
    matmul_into(w.value(), x.value(), out);
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += b.value()[r];
    }
    return make_result(std::move(out), {w, x, b}, [](Node& n) {
        const Matrix& wv = n.parents[0]->value;
        const Matrix& xv = n.parents[1]->value;
        Matrix tmp;
        if (Matrix* g = grad_of(n, 0)) {
            matmul_into(n.grad, xv.transposed(), tmp);
            *g += tmp;
        }
        if (Matrix* g = grad_of(n, 1)) {
            matmul_into(wv.transposed(), n.grad, tmp);
            *g += tmp;
        }
        if (Matrix* g = grad_of(n, 2)) {
            for (std::size_t r = 0; r < n.grad.rows(); ++r) {
                double s = 0.0;
                for (std::size_t c = 0; c < n.grad.cols(); ++c) s += n.grad(r, c);
                (*g)[r] += s;
            }
        }
    });
}

Var relu(const Var& x) {
    Matrix out = x.value();
    for (auto& v : out.storage()) v = v > 0.0 ? v : 0.0;
    return make_result(std::move(out), {x}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            const Matrix& xv = n.parents[0]->value;
            for (std::size_t i = 0; i < g->size(); ++i) {
                if (xv[i] > 0.0) (*g)[i] += n.grad[i];
            }
        }
    });
}

Var abs(const Var& x) {
    Matrix out = x.value();
    for (auto& v : out.storage()) v = std::fabs(v);
    return make_result(std::move(out), {x}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            const Matrix& xv = n.parents[0]->value;
            for (std::size_t i = 0; i < g->size(); ++i) {
                const double s = xv[i] > 0.0 ? 1.0 : (xv[i] < 0.0 ? -1.0 : 0.0);
                (*g)[i] += s * n.grad[i];
            }
        }
    });
}

Var softmax_rows(const Var& x) {
    Matrix out = x.value();
    for (std::size_t r = 0; r < out.rows(); ++r) {
        double mx = out(r, 0);
        for (std::size_t c = 1; c < out.cols(); ++c) mx = std::max(mx, out(r, c));
        double z = 0.0;
        for (std::size_t c = 0; c < out.cols(); ++c) {
            out(r, c) = std::exp(out(r, c) - mx);
            z += out(r, c);
        }
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) /= z;
    }
    Matrix probs = out;
    return make_result(std::move(out), {x}, [probs = std::move(probs)](Node& n) {
        Matrix* g = grad_of(n, 0);
        if (!g) return;
        for (std::size_t r = 0; r < probs.rows(); ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < probs.cols(); ++c) dot += n.grad(r, c) * probs(r, c);
            for (std::size_t c = 0; c < probs.cols(); ++c) {
                (*g)(r, c) += probs(r, c) * (n.grad(r, c) - dot);
            }
        }
    });
}

Var softmax_cols(const Var& x) { return transpose(softmax_rows(transpose(x))); }

Var sum_all(const Var& x) {
    double s = 0.0;
    for (double v : x.value().data()) s += v;
    return make_result(Matrix(1, 1, s), {x}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            for (auto& v : g->storage()) v += n.grad[0];
        }
    });
}

Var mean_all(const Var& x) {
    const double count = static_cast<double>(x.value().size());
    if (count == 0) throw ValidationError("mean_all: empty input");
    return scale(sum_all(x), 1.0 / count);
}

Var sum_cols(const Var& x) {
    Matrix out(x.rows(), 1);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) out[r] += x.value()(r, c);
    }
    return make_result(std::move(out), {x}, [](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t r = 0; r < g->rows(); ++r) {
                for (std::size_t c = 0; c < g->cols(); ++c) (*g)(r, c) += n.grad[r];
            }
        }
    });
}

Var column(const Var& x, std::size_t j) {
    if (j >= x.cols()) throw ValidationError("column: index out of range");
    Matrix out = Matrix::column(x.value().col(j));
    return make_result(std::move(out), {x}, [j](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t r = 0; r < g->rows(); ++r) (*g)(r, j) += n.grad[r];
        }
    });
}

Var hcat(const std::vector<Var>& parts) {
    if (parts.empty()) throw ValidationError("hcat: no inputs");
    const std::size_t rows = parts.front().rows();
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p.rows() != rows) throw ValidationError("hcat: row counts differ");
        cols += p.cols();
    }
    Matrix out(rows, cols);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < p.cols(); ++c) out(r, offset + c) = p.value()(r, c);
        }
        offset += p.cols();
    }
    return make_result(std::move(out), parts, [](Node& n) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < n.parents.size(); ++i) {
            const std::size_t w = n.parents[i]->value.cols();
            if (Matrix* g = grad_of(n, i)) {
                for (std::size_t r = 0; r < g->rows(); ++r) {
                    for (std::size_t c = 0; c < w; ++c) (*g)(r, c) += n.grad(r, off + c);
                }
            }
            off += w;
        }
    });
}

Var vcat(const std::vector<Var>& parts) {
    if (parts.empty()) throw ValidationError("vcat: no inputs");
    const std::size_t cols = parts.front().cols();
    std::vector<double> data;
    std::size_t rows = 0;
    for (const auto& p : parts) {
        if (p.cols() != cols) throw ValidationError("vcat: column counts differ");
        data.insert(data.end(), p.value().data().begin(), p.value().data().end());
        rows += p.rows();
    }
    return make_result(Matrix(rows, cols, std::move(data)), parts, [](Node& n) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < n.parents.size(); ++i) {
            const std::size_t len = n.parents[i]->value.size();
            if (Matrix* g = grad_of(n, i)) {
                for (std::size_t k = 0; k < len; ++k) (*g)[k] += n.grad[off + k];
            }
            off += len;
        }
    });
}

Var scalar_affine(const Var& x, const Var& scale_v, const Var& shift_v) {
    if (scale_v.value().size() != 1 || shift_v.value().size() != 1) {
        throw ValidationError("scalar_affine: scale and shift must be 1x1");
    }
    const double a = scale_v.value()[0];
    const double b = shift_v.value()[0];
    Matrix out = x.value();
    for (auto& v : out.storage()) v = v * a + b;
    return make_result(std::move(out), {x, scale_v, shift_v}, [](Node& n) {
        const Matrix& xv = n.parents[0]->value;
        const double a = n.parents[1]->value[0];
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t i = 0; i < g->size(); ++i) (*g)[i] += a * n.grad[i];
        }
        if (Matrix* g = grad_of(n, 1)) {
            double s = 0.0;
            for (std::size_t i = 0; i < xv.size(); ++i) s += xv[i] * n.grad[i];
            (*g)[0] += s;
        }
        if (Matrix* g = grad_of(n, 2)) {
            double s = 0.0;
            for (double v : n.grad.data()) s += v;
            (*g)[0] += s;
        }
    });
}

Var inverse_scalar_affine(const Var& y, const Var& scale_v, const Var& shift_v, double eps) {
    if (scale_v.value().size() != 1 || shift_v.value().size() != 1) {
        throw ValidationError("inverse_scalar_affine: scale and shift must be 1x1");
    }
    const double d = scale_v.value()[0] + eps;
    const double b = shift_v.value()[0];
    Matrix out = y.value();
    for (auto& v : out.storage()) v = (v - b) / d;
    Matrix result = out;
    return make_result(std::move(out), {y, scale_v, shift_v},
                       [d, result = std::move(result)](Node& n) {
                           if (Matrix* g = grad_of(n, 0)) {
                               for (std::size_t i = 0; i < g->size(); ++i) {
                                   (*g)[i] += n.grad[i] / d;
                               }
                           }
                           // d out / d scale = -(y - b) / d^2 = -out / d
                           if (Matrix* g = grad_of(n, 1)) {
                               double s = 0.0;
                               for (std::size_t i = 0; i < result.size(); ++i) {
                                   s -= n.grad[i] * result[i] / d;
                               }
                               (*g)[0] += s;
                           }
                           if (Matrix* g = grad_of(n, 2)) {
                               double s = 0.0;
                               for (double v : n.grad.data()) s -= v / d;
                               (*g)[0] += s;
                           }
                       });
}

namespace {

template <bool IsDilation>
Var morph_filter(const Var& x, const SEKernel& k, const char* op) {
    require_column(x, op);
    const std::size_t len = x.rows();
    Matrix out(len, 1);
    std::vector<std::size_t> winners(len);
    if constexpr (IsDilation) {
        dilate_into(x.value().data(), k, out.data(), winners);
    } else {
        erode_into(x.value().data(), k, out.data(), winners);
    }
    return make_result(std::move(out), {x}, [winners = std::move(winners)](Node& n) {
        if (Matrix* g = grad_of(n, 0)) {
            for (std::size_t t = 0; t < winners.size(); ++t) (*g)[winners[t]] += n.grad[t];
        }
    });
}

}  // namespace

Var dilate(const Var& x, const SEKernel& k) { return morph_filter<true>(x, k, "dilate"); }
Var erode(const Var& x, const SEKernel& k) { return morph_filter<false>(x, k, "erode"); }

Var mean_envelope(const Var& x, const SEKernel& k) {
    return scale(add(dilate(x, k), erode(x, k)), 0.5);
}

Var conv2d_components(const Var& x, const Var& kernels, const Var& bias) {
    const std::size_t steps = x.rows();
    const std::size_t channels = x.cols();
    const std::size_t outputs = kernels.rows();
    if (channels == 0 || kernels.cols() % channels != 0) {
        throw ValidationError("conv2d_components: kernel width " +
                              std::to_string(kernels.cols()) + " is not a multiple of " +
                              std::to_string(channels) + " components");
    }
    const std::size_t span = kernels.cols() / channels;
    if (span % 2 == 0) throw ValidationError("conv2d_components: kernel time span must be odd");
    if (bias.rows() != outputs || bias.cols() != 1) {
        throw ValidationError("conv2d_components: bias must be " + std::to_string(outputs) +
                              "x1");
    }
    const auto half = static_cast<std::ptrdiff_t>(span / 2);
    auto src = [steps, half](std::size_t t, std::size_t u) {
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(t + u) - half;
        i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(steps) - 1);
        return static_cast<std::size_t>(i);
    };

    const Matrix& xv = x.value();
    const Matrix& kv = kernels.value();
    Matrix out(steps, outputs);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t j = 0; j < outputs; ++j) {
            double acc = bias.value()[j];
            for (std::size_t u = 0; u < span; ++u) {
                const std::size_t row = src(t, u);
                for (std::size_t v = 0; v < channels; ++v) {
                    acc += xv(row, v) * kv(j, u * channels + v);
                }
            }
            out(t, j) = acc;
        }
    }
    return make_result(std::move(out), {x, kernels, bias}, [src, span](Node& n) {
        const Matrix& xv = n.parents[0]->value;
        const Matrix& kv = n.parents[1]->value;
        const std::size_t steps = xv.rows();
        const std::size_t channels = xv.cols();
        const std::size_t outputs = kv.rows();
        Matrix* gx = grad_of(n, 0);
        Matrix* gk = grad_of(n, 1);
        Matrix* gb = grad_of(n, 2);
        for (std::size_t t = 0; t < steps; ++t) {
            for (std::size_t j = 0; j < outputs; ++j) {
                const double g = n.grad(t, j);
                if (g == 0.0) continue;
                if (gb) (*gb)[j] += g;
                for (std::size_t u = 0; u < span; ++u) {
                    const std::size_t row = src(t, u);
                    for (std::size_t v = 0; v < channels; ++v) {
                        if (gx) (*gx)(row, v) += g * kv(j, u * channels + v);
                        if (gk) (*gk)(j, u * channels + v) += g * xv(row, v);
                    }
                }
            }
        }
    });
}

}  // namespace dpad::nn
