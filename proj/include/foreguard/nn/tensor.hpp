#pragma once
// Row-major double tensor. The dense stack only ever needs rank 1 and 2.

#include <cstddef>
#include <numeric>
#include <vector>

#include "foreguard/common.hpp"

namespace foreguard::nn {

struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;

    explicit Tensor(std::vector<std::size_t> shape_in) : shape(std::move(shape_in)) {
        data.assign(element_count(shape), 0.0);
    }

    static std::size_t element_count(const std::vector<std::size_t>& shape) {
        std::size_t n = 1;
        for (std::size_t d : shape) {
            require(d > 0, ErrorKind::Dimension, "tensor dimensions must be positive");
            n *= d;
        }
        return n;
    }

    static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }

    static Tensor matrix(std::size_t rows, std::size_t cols) { return Tensor({rows, cols}); }

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }

    std::size_t rows() const {
        require(rank() == 2, ErrorKind::Dimension, "rows() on non-matrix tensor");
        return shape[0];
    }
    std::size_t cols() const {
        require(rank() == 2, ErrorKind::Dimension, "cols() on non-matrix tensor");
        return shape[1];
    }

    double& at(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

// out = a (r x k) * b (k x c); plain ikj loop, cache-friendly enough for the
// layer sizes this engine targets.
inline void matmul(const Tensor& a, const Tensor& b, Tensor& out) {
    const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
    require(b.rows() == k, ErrorKind::Dimension,
            strfmt("matmul inner dimensions differ: %zu vs %zu", k, b.rows()));
    if (out.shape != std::vector<std::size_t>{r, c}) out = Tensor::matrix(r, c);
    std::fill(out.data.begin(), out.data.end(), 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        const double* arow = a.data.data() + i * k;
        double* orow = out.data.data() + i * c;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            if (av == 0.0) continue;
            const double* brow = b.data.data() + kk * c;
            for (std::size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
        }
    }
}

// out = a^T (k x r)^T... i.e. out(r_a_cols x b_cols) = a^T * b
inline void matmul_at_b(const Tensor& a, const Tensor& b, Tensor& out) {
    const std::size_t n = a.rows(), k = a.cols(), c = b.cols();
    require(b.rows() == n, ErrorKind::Dimension, "matmul_at_b row mismatch");
    if (out.shape != std::vector<std::size_t>{k, c}) out = Tensor::matrix(k, c);
    std::fill(out.data.begin(), out.data.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.data.data() + i * k;
        const double* brow = b.data.data() + i * c;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            if (av == 0.0) continue;
            double* orow = out.data.data() + kk * c;
            for (std::size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
        }
    }
}

// out (a_rows x b_rows) = a * b^T
inline void matmul_a_bt(const Tensor& a, const Tensor& b, Tensor& out) {
    const std::size_t r = a.rows(), k = a.cols(), c = b.rows();
    require(b.cols() == k, ErrorKind::Dimension, "matmul_a_bt col mismatch");
    if (out.shape != std::vector<std::size_t>{r, c}) out = Tensor::matrix(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        const double* arow = a.data.data() + i * k;
        for (std::size_t j = 0; j < c; ++j) {
            const double* brow = b.data.data() + j * k;
            double acc = 0.0;
            for (std::size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
            out.at(i, j) = acc;
        }
    }
}

} // namespace foreguard::nn
