#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace moebiuslab {

/// Highest total degree a Taylor expansion may carry.
inline constexpr int kMaxTaylorOrder = 6;

/// Graded monomial table for polynomials in `nvars` formal increments.
///
/// Monomials are ordered by total degree, so the coefficients of a
/// polynomial truncated at degree d form a prefix of the full table. One
/// immutable instance per variable count is shared process-wide.
class MonomialBasis {
public:
    struct Product {
        std::uint32_t lhs;
        std::uint32_t rhs;
        std::uint32_t out;
    };
    struct DerivativeTerm {
        std::uint32_t src;
        std::uint32_t dst;
        double factor;
    };

    static const MonomialBasis& get(int nvars);

    int nvars() const { return nvars_; }
    std::size_t size(int order) const { return prefix_[static_cast<std::size_t>(order)]; }
    std::span<const int> exponents(std::size_t idx) const {
        return {exps_.data() + idx * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
    }
    int degree(std::size_t idx) const { return degree_[idx]; }
    std::size_t index(std::span<const int> exps) const;

    /// Coefficient products whose output degree is at most `order`.
    std::span<const Product> products(int order) const {
        return {products_.data(), product_prefix_[static_cast<std::size_t>(order)]};
    }
    /// d/d(var) terms for a polynomial of degree `order`; dst has degree < order.
    std::span<const DerivativeTerm> derivative_terms(int var, int order) const;

private:
    explicit MonomialBasis(int nvars);

    int nvars_;
    std::vector<int> exps_;
    std::vector<int> degree_;
    std::vector<std::size_t> prefix_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> key_order_;
    std::vector<Product> products_;
    std::vector<std::size_t> product_prefix_;
    std::vector<std::vector<DerivativeTerm>> deriv_;
    std::vector<std::vector<std::size_t>> deriv_prefix_;
};

/// Truncated multivariate Taylor polynomial: the value of a scalar field and
/// all its partial derivatives up to `order()` at a base point.
///
/// A default-constructed Taylor is a plain constant (no variables); it mixes
/// with any expansion as if it were a double.
class Taylor {
public:
    Taylor() : coeffs_(1, 0.0) {}
    Taylor(double v) : coeffs_(1, v) {}  // NOLINT(google-explicit-constructor)

    static Taylor constant(int nvars, int order, double v);
    /// The coordinate function x_var expanded about x_var = v.
    static Taylor variable(int nvars, int order, int var, double v);

    bool is_constant() const { return basis_ == nullptr; }
    int nvars() const { return basis_ ? basis_->nvars() : 0; }
    int order() const { return basis_ ? order_ : kMaxTaylorOrder; }
    double value() const { return coeffs_[0]; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    const MonomialBasis* basis() const { return basis_; }

    double coefficient(std::span<const int> exps) const;
    /// Partial derivative ∂^α at the base point (α! times the coefficient).
    double partial(std::span<const int> exps) const;

    Taylor derivative(int var) const;
    Taylor truncated(int order) const;
    /// Replaces the constant term, keeping all higher coefficients.
    Taylor with_value(double v) const;

    Taylor& operator+=(const Taylor& o);
    Taylor& operator-=(const Taylor& o);
    Taylor& operator*=(const Taylor& o);
    Taylor& operator/=(const Taylor& o);
    Taylor& operator+=(double v) { coeffs_[0] += v; return *this; }
    Taylor& operator-=(double v) { coeffs_[0] -= v; return *this; }
    Taylor& operator*=(double v);
    Taylor& operator/=(double v) { return *this *= (1.0 / v); }

    Taylor operator-() const;

    /// f(x0 + h) = Σ d_k h^k / k! where d_k = f^(k)(x0) are supplied.
    Taylor compose(std::span<const double> derivs) const;

    friend Taylor operator*(const Taylor& a, const Taylor& b);

private:
    Taylor(const MonomialBasis* basis, int order);

    const MonomialBasis* basis_ = nullptr;
    int order_ = 0;
    std::vector<double> coeffs_;
};

inline Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
inline Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
inline Taylor operator/(Taylor a, const Taylor& b) { return a /= b; }
inline Taylor operator+(Taylor a, double b) { return a += b; }
inline Taylor operator+(double a, Taylor b) { return b += a; }
inline Taylor operator-(Taylor a, double b) { return a -= b; }
inline Taylor operator-(double a, const Taylor& b) { return -b + a; }
inline Taylor operator*(Taylor a, double b) { return a *= b; }
inline Taylor operator*(double a, Taylor b) { return b *= a; }
inline Taylor operator/(Taylor a, double b) { return a /= b; }
Taylor operator/(double a, const Taylor& b);

Taylor reciprocal(const Taylor& x);
Taylor exp(const Taylor& x);
Taylor log(const Taylor& x);
Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor sinh(const Taylor& x);
Taylor cosh(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor pow(const Taylor& x, double p);
Taylor atan(const Taylor& x);
Taylor square(const Taylor& x);

using TaylorVector = std::vector<Taylor>;

Taylor dot(std::span<const Taylor> a, std::span<const Taylor> b);

}  // namespace moebiuslab
