#include "moebiuslab/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace moebiuslab {

Eigen::MatrixXd TaylorMatrix::values() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
}

TaylorMatrix TaylorMatrix::derivative(int var) const {
    TaylorMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i].derivative(var);
    return r;
}

TaylorMatrix operator*(const TaylorMatrix& a, const TaylorMatrix& b) {
    TaylorMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < b.cols(); ++j) {
            Taylor s = a(i, 0) * b(0, j);
            for (int k = 1; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            r(i, j) = std::move(s);
        }
    }
    return r;
}

namespace {

void swap_rows(TaylorMatrix& m, int a, int b) {
    if (a == b) return;
    for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

int pivot_row(const TaylorMatrix& m, int col) {
    int best = col;
    for (int i = col + 1; i < m.rows(); ++i)
        if (std::abs(m(i, col).value()) > std::abs(m(best, col).value())) best = i;
    if (m(best, col).value() == 0.0) throw std::domain_error("singular Taylor matrix");
    return best;
}

}  // namespace

TaylorMatrix inverse(TaylorMatrix m) {
    const int n = m.rows();
    TaylorMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = Taylor(i == j ? 1.0 : 0.0);
    for (int c = 0; c < n; ++c) {
        const int p = pivot_row(m, c);
        swap_rows(m, p, c);
        swap_rows(inv, p, c);
        const Taylor r = reciprocal(m(c, c));
        for (int j = 0; j < n; ++j) {
            m(c, j) *= r;
            inv(c, j) *= r;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c) continue;
            const Taylor factor = m(i, c);
            for (int j = 0; j < n; ++j) {
                m(i, j) -= factor * m(c, j);
                inv(i, j) -= factor * inv(c, j);
            }
        }
    }
    return inv;
}

Taylor determinant(TaylorMatrix m) {
    const int n = m.rows();
    Taylor det(1.0);
    for (int c = 0; c < n; ++c) {
        const int p = pivot_row(m, c);
        if (p != c) {
            swap_rows(m, p, c);
            det = -det;
        }
        det *= m(c, c);
        const Taylor r = reciprocal(m(c, c));
        for (int i = c + 1; i < n; ++i) {
            const Taylor factor = m(i, c) * r;
            for (int j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
        }
    }
    return det;
}

Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g) {
    const auto n = g.rows();
    Eigen::MatrixXd f = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        Eigen::VectorXd v = f.col(a);
        for (Eigen::Index b = 0; b < a; ++b) v -= (f.col(b).dot(g * v)) * f.col(b);
        const double norm2 = v.dot(g * v);
        if (!(norm2 > 0.0)) throw std::domain_error("metric is not positive definite");
        f.col(a) = v / std::sqrt(norm2);
    }
    return f;
}

}  // namespace moebiuslab
