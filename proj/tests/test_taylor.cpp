#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "moebiuslab/linalg.hpp"
#include "moebiuslab/taylor.hpp"

using namespace moebiuslab;

namespace {

Taylor random_taylor(std::mt19937_64& gen, int nvars, int order) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Taylor t = Taylor::constant(nvars, order, 0.0);
    for (auto& c : t.coeffs()) c = dist(gen);
    return t;
}

double max_gap(const Taylor& a, const Taylor& b) {
    double g = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) g = std::max(g, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return g;
}

double univariate_coeff(const Taylor& t, int var, int k) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(var)] = k;
    return t.coefficient(std::span<const int>(e.data(), static_cast<std::size_t>(t.nvars())));
}

}  // namespace

TEST_CASE("monomial basis sizes follow the binomial count") {
    const auto& b = MonomialBasis::get(3);
    CHECK(b.size(0) == 1);
    CHECK(b.size(1) == 4);
    CHECK(b.size(4) == 35);
    CHECK(b.size(kMaxTaylorOrder) == 84);
    for (std::size_t i = 0; i < b.size(4); ++i) CHECK(b.index(b.exponents(i)) == i);
}

TEST_CASE("elementary functions reproduce their known series") {
    const int order = 5;
    const Taylor x = Taylor::variable(2, order, 0, 0.0);
    const std::array<double, 6> fact = {1, 1, 2, 6, 24, 120};

    const Taylor e = exp(x);
    for (int k = 0; k <= order; ++k) CHECK(univariate_coeff(e, 0, k) == doctest::Approx(1.0 / fact[static_cast<std::size_t>(k)]).epsilon(1e-15));

    const Taylor s = sin(x);
    const Taylor c = cos(x);
    const std::array<double, 6> sin_series = {0, 1, 0, -1.0 / 6, 0, 1.0 / 120};
    const std::array<double, 6> cos_series = {1, 0, -0.5, 0, 1.0 / 24, 0};
    for (int k = 0; k <= order; ++k) {
        CHECK(std::abs(univariate_coeff(s, 0, k) - sin_series[static_cast<std::size_t>(k)]) < 1e-15);
        CHECK(std::abs(univariate_coeff(c, 0, k) - cos_series[static_cast<std::size_t>(k)]) < 1e-15);
    }

    // log(1+t) = t - t^2/2 + t^3/3 - ...
    const Taylor l = log(1.0 + x);
    for (int k = 1; k <= order; ++k)
        CHECK(std::abs(univariate_coeff(l, 0, k) - ((k % 2) ? 1.0 : -1.0) / k) < 1e-15);

    // sqrt(1-t) = 1 - t/2 - t^2/8 - t^3/16 - 5t^4/128 - 7t^5/256
    const Taylor r = sqrt(1.0 - x);
    const std::array<double, 6> sqrt_series = {1, -0.5, -1.0 / 8, -1.0 / 16, -5.0 / 128, -7.0 / 256};
    for (int k = 0; k <= order; ++k) CHECK(std::abs(univariate_coeff(r, 0, k) - sqrt_series[static_cast<std::size_t>(k)]) < 1e-15);

    const Taylor a = atan(x);
    const std::array<double, 6> atan_series = {0, 1, 0, -1.0 / 3, 0, 1.0 / 5};
    for (int k = 0; k <= order; ++k) CHECK(std::abs(univariate_coeff(a, 0, k) - atan_series[static_cast<std::size_t>(k)]) < 1e-14);

    const Taylor ch = cosh(x) - sinh(x);
    const Taylor em = exp(-x);
    CHECK(max_gap(ch, em) < 1e-15);
}

TEST_CASE("mixed partials of a product of exponentials") {
    const Taylor x = Taylor::variable(2, 4, 0, 0.3);
    const Taylor y = Taylor::variable(2, 4, 1, -0.2);
    const Taylor f = exp(x + 2.0 * y);
    const double base = std::exp(0.3 - 0.4);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) {
            const std::array<int, 2> e = {i, j};
            CHECK(f.partial(e) == doctest::Approx(base * std::pow(2.0, j)).epsilon(1e-13));
        }
}

TEST_CASE("ring axioms hold on random operands") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const Taylor a = random_taylor(gen, 3, 4);
        const Taylor b = random_taylor(gen, 3, 4);
        const Taylor c = random_taylor(gen, 3, 4);
        CHECK(max_gap((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(max_gap(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(max_gap(a * b, b * a) < 1e-12);
        const Taylor unit = b.with_value(2.0 + std::abs(b.value()));
        CHECK(max_gap((a / unit) * unit, a) < 1e-12);
        CHECK(max_gap(exp(log(unit)), unit) < 1e-12);
    }
}

TEST_CASE("derivative lowers the order and differentiates monomials") {
    const Taylor x = Taylor::variable(2, 4, 0, 0.0);
    const Taylor y = Taylor::variable(2, 4, 1, 0.0);
    const Taylor f = x * x * y + 3.0 * y * y * y;
    const Taylor fx = f.derivative(0);
    CHECK(fx.order() == 3);
    const std::array<int, 2> xy = {1, 1};
    const std::array<int, 2> yy = {0, 2};
    CHECK(fx.coefficient(xy) == doctest::Approx(2.0));
    CHECK(f.derivative(1).coefficient(yy) == doctest::Approx(9.0));
}

TEST_CASE("constants mix with expansions and truncation takes the lower order") {
    const Taylor x = Taylor::variable(2, 4, 0, 1.0);
    const Taylor lo = Taylor::variable(2, 2, 1, 0.0);
    CHECK((x + lo).order() == 2);
    CHECK((x * lo).order() == 2);
    const Taylor k(3.0);
    CHECK((k * x).value() == doctest::Approx(3.0));
    CHECK((k + x).order() == 4);
    CHECK((x - k).value() == doctest::Approx(-2.0));
}

TEST_CASE("Taylor matrix inverse and determinant") {
    std::mt19937_64 gen(7);
    TaylorMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = random_taylor(gen, 2, 3).with_value(i == j ? 3.0 : 0.5);
    const TaylorMatrix p = m * inverse(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Taylor expect = Taylor::constant(2, 3, i == j ? 1.0 : 0.0);
            CHECK(max_gap(p(i, j), expect) < 1e-12);
        }
    // det(M) * det(M^-1) == 1 as a series
    const Taylor d = determinant(m) * determinant(inverse(m));
    CHECK(max_gap(d, Taylor::constant(2, 3, 1.0)) < 1e-12);
}

TEST_CASE("Gram-Schmidt frame is orthonormal for the metric") {
    Eigen::MatrixXd g(3, 3);
    g << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 0.8;
    const Eigen::MatrixXd f = orthonormal_frame(g);
    CHECK((f.transpose() * g * f - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
    // Upper-triangular: the first frame vector is along e_1.
    CHECK(std::abs(f(1, 0)) < 1e-15);
    CHECK(std::abs(f(2, 0)) < 1e-15);
}
