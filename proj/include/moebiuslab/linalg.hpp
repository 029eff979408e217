#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/taylor.hpp"

namespace moebiuslab {

/// Dense row-major matrix of Taylor expansions.
class TaylorMatrix {
public:
    TaylorMatrix() = default;
    TaylorMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Taylor& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
    const Taylor& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

    Eigen::MatrixXd values() const;
    TaylorMatrix derivative(int var) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Taylor> data_;
};

TaylorMatrix operator*(const TaylorMatrix& a, const TaylorMatrix& b);

/// Gauss-Jordan inverse; pivots are chosen on the constant terms.
TaylorMatrix inverse(TaylorMatrix m);
Taylor determinant(TaylorMatrix m);

/// Rank-4 array with n^4 entries, indexed (l, k, i, j).
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }
    double& operator()(int l, int k, int i, int j) { return data_[offset(l, k, i, j)]; }
    double operator()(int l, int k, int i, int j) const { return data_[offset(l, k, i, j)]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t offset(int l, int k, int i, int j) const {
        return ((static_cast<std::size_t>(l) * n_ + k) * n_ + i) * n_ + j;
    }
    int n_ = 0;
    std::vector<double> data_;
};

/// Modified Gram-Schmidt on the coordinate basis e_1..e_n against the metric
/// `g`; columns of the result are g-orthonormal, in that fixed order.
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g);

}  // namespace moebiuslab
