#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "critlab/errors.hpp"

namespace critlab {

// Dense vectors/matrices for small d (typically d <= 8). All norms in this
// project are the l1 norm.

using Vec = std::vector<double>;

inline double l1_norm(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatchError("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec scaled(const Vec& x, double c) {
    Vec y(x);
    for (double& v : y) v *= c;
    return y;
}

inline Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatchError("add: size mismatch");
    Vec y(a);
    for (std::size_t i = 0; i < b.size(); ++i) y[i] += b[i];
    return y;
}

inline Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatchError("sub: size mismatch");
    Vec y(a);
    for (std::size_t i = 0; i < b.size(); ++i) y[i] -= b[i];
    return y;
}

// Row-major square matrix.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int dim, double fill = 0.0)
        : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, fill) {}
    Matrix(int dim, std::vector<double> entries) : dim_(dim), a_(std::move(entries)) {
        if (a_.size() != static_cast<std::size_t>(dim) * dim)
            throw DimensionMismatchError("Matrix: entry count != dim*dim");
    }

    int dim() const { return dim_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const std::vector<double>& data() const { return a_; }

    // y = M x
    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw DimensionMismatchError("Matrix::apply: size mismatch");
        Vec y(dim_, 0.0);
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    // y = x^T M  (row vector times matrix)
    Vec apply_left(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim_)
            throw DimensionMismatchError("Matrix::apply_left: size mismatch");
        Vec y(dim_, 0.0);
        for (int j = 0; j < dim_; ++j) {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += x[i] * (*this)(i, j);
            y[j] = s;
        }
        return y;
    }

  private:
    int dim_ = 0;
    std::vector<double> a_;
};

} // namespace critlab
