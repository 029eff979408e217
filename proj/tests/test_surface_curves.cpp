#include <doctest.h>

#include <cmath>
#include <numbers>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/curves.hpp"
#include "moebiuslab/errors.hpp"
#include "moebiuslab/surface.hpp"

using namespace moebiuslab;

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// d^k/ds^k of a curve component at s, read off a univariate expansion.
Eigen::MatrixXd curve_derivatives(const IntegratedCurve& c, double s, int k) {
    const TaylorVector p = c.position(Taylor::variable(1, k, 0, s));
    Eigen::MatrixXd d(static_cast<Eigen::Index>(p.size()), k + 1);
    for (std::size_t a = 0; a < p.size(); ++a)
        for (int j = 0; j <= k; ++j) {
            const int e[1] = {j};
            d(static_cast<Eigen::Index>(a), j) = p[a].partial(e);
        }
    return d;
}

}  // namespace

TEST_CASE("clifford torus principal curvatures and model containment") {
    for (double r : {0.3, std::numbers::sqrt2 / 2.0, 0.8}) {
        const SurfaceSpec g = clifford_torus(r);
        const double s = std::sqrt(1.0 - r * r);
        for (const auto& x : sample_points(g.domain, 16, 3)) {
            CHECK(std::abs(g.position(as_span(x)).norm() - 1.0) < 1e-12);
            const SurfaceGeometry sg = surface_geometry(g, as_span(x));
            const double lo = std::min(s / r, -r / s), hi = std::max(s / r, -r / s);
            const Eigen::Vector2d k = sg.principal;
            const bool same = std::abs(k(0) - lo) < 1e-10 && std::abs(k(1) - hi) < 1e-10;
            const bool flipped = std::abs(k(0) + hi) < 1e-10 && std::abs(k(1) + lo) < 1e-10;
            CHECK((same || flipped));
            CHECK(std::abs(sg.K.value()) < 1e-10);
        }
    }
    const SurfaceGeometry mid = surface_geometry(clifford_torus(std::numbers::sqrt2 / 2.0), std::vector<double>{1.0, 2.0});
    CHECK(std::abs(mid.H.value()) < 1e-12);
    CHECK_THROWS_AS(clifford_torus(1.0), Error);
}

TEST_CASE("hyperbolic cylinder is isoparametric and flat") {
    for (double r : {0.5, 1.0, 2.0}) {
        const SurfaceSpec g = hyperbolic_cylinder(r);
        // Equidistant surface at distance d from a geodesic: tanh d and coth d, sinh d = r.
        const double tanh_d = r / std::sqrt(1.0 + r * r);
        double lo_min = 1e9, lo_max = -1e9, hi_min = 1e9, hi_max = -1e9;
        for (const auto& x : sample_points(g.domain, 32, 11)) {
            CHECK(g.position(as_span(x))(2) > 0.0);
            const SurfaceGeometry sg = surface_geometry(g, as_span(x));
            CHECK(std::abs(sg.K.value()) < 1e-8);
            const Eigen::Vector2d k = sg.principal.cwiseAbs();
            lo_min = std::min(lo_min, k.minCoeff());
            lo_max = std::max(lo_max, k.minCoeff());
            hi_min = std::min(hi_min, k.maxCoeff());
            hi_max = std::max(hi_max, k.maxCoeff());
        }
        CHECK(lo_max - lo_min < 1e-8);
        CHECK(hi_max - hi_min < 1e-8);
        CHECK(std::abs(lo_min - tanh_d) < 1e-10);
        CHECK(std::abs(hi_min - 1.0 / tanh_d) < 1e-10);
    }
}

TEST_CASE("surface charts leaving the upper half-space are rejected") {
    SurfaceSpec g = hyperbolic_cylinder(1.0);
    g.eval = [](std::span<const Taylor> x) { return TaylorVector{x[0], x[1], x[0] * 0.0 - 0.5}; };
    CHECK_THROWS_AS(surface_geometry(g, std::vector<double>{0.0, 0.0}), Error);
}

TEST_CASE("torus of revolution has the textbook curvatures") {
    const double R = 2.0, a = 0.5;
    const SurfaceSpec g = torus_of_revolution(R, a);
    for (const auto& x : sample_points(g.domain, 8, 5)) {
        const SurfaceGeometry sg = surface_geometry(g, as_span(x));
        const double cu = std::cos(x(0));
        CHECK(std::abs(std::abs(sg.K.value()) - std::abs(cu / (a * (R + a * cu)))) < 1e-10);
    }
}

TEST_CASE("constant curvature plane curve closes into a circle") {
    const double kappa = 2.0;
    CurveSpec cs = exponential_law(0, 0.0, kappa, 0.0, 2.0 * std::numbers::pi / kappa);
    const auto c = curve_with_curvature(cs);
    const Eigen::VectorXd start = c->state(0.0), end = c->state(cs.s_hi);
    CHECK((end.head<2>() - start.head<2>()).norm() < 1e-8);
    // Center at distance 1/κ to the left of the initial tangent (1, 0).
    const Eigen::Vector2d center(0.0, 1.0 / kappa);
    for (double s : {0.3, 1.1, 2.9})
        CHECK(std::abs((c->state(s).head<2>() - center).norm() - 1.0 / kappa) < 1e-10);
}

TEST_CASE("exponential law with zero rate matches the constant law") {
    auto exp_curve = curve_with_curvature(exponential_law(0, 0.0, 1.5, 0.0, 2.0));
    CurveSpec flat;
    flat.name = "constant";
    flat.kappa = [](const Taylor&) { return Taylor(1.5); };
    flat.s_hi = 2.0;
    auto const_curve = curve_with_curvature(flat);
    for (double s : {0.0, 0.7, 1.9}) CHECK((exp_curve->state(s) - const_curve->state(s)).norm() < 1e-14);
}

TEST_CASE("integrated curves reproduce their curvature law") {
    SUBCASE("plane, square-root law") {
        const auto c = curve_with_curvature(sqrt_law(0, 1.0, 1.0, 0.0, 2.0));
        for (double s : {0.2, 0.9, 1.7}) {
            const Eigen::MatrixXd d = curve_derivatives(*c, s, 2);
            CHECK(std::abs(d.col(1).norm() - 1.0) < 1e-12);
            const double k = d(0, 1) * d(1, 2) - d(1, 1) * d(0, 2);
            CHECK(std::abs(k - 1.0 / std::sqrt(s + 1.0)) < 1e-10);
        }
    }
    SUBCASE("sphere, exponential law") {
        const auto c = curve_with_curvature(exponential_law(1, 0.4, 1.2, 0.0, 2.0));
        for (double s : {0.2, 0.9, 1.7}) {
            const Eigen::MatrixXd d = curve_derivatives(*c, s, 2);
            CHECK(std::abs(d.col(0).norm() - 1.0) < 1e-12);
            CHECK(std::abs(d.col(1).norm() - 1.0) < 1e-10);
            Eigen::Matrix3d m;
            m << d.col(0), d.col(1), d.col(2);
            CHECK(std::abs(m.determinant() - 1.2 * std::exp(0.4 * s)) < 1e-10);
        }
    }
    SUBCASE("hyperbolic plane, exponential law") {
        const auto c = curve_with_curvature(exponential_law(-1, 0.3, 1.0, 0.0, 2.0));
        for (double s : {0.2, 0.9, 1.7}) {
            const Eigen::MatrixXd d = curve_derivatives(*c, s, 2);
            const double z = d(1, 0);
            CHECK(z > 0.0);
            CHECK(std::abs(d.col(1).norm() / z - 1.0) < 1e-12);
            // Euclidean curvature of the trace, then κ_h = z κ_e + (horizontal unit tangent).
            const double speed = d.col(1).norm();
            const double ke = (d(0, 1) * d(1, 2) - d(1, 1) * d(0, 2)) / (speed * speed * speed);
            CHECK(std::abs(z * ke + d(0, 1) / speed - std::exp(0.3 * s)) < 1e-10);
        }
    }
}

TEST_CASE("integrator rejects coarse steps and non-positive curvature") {
    CurveSpec cs = exponential_law(0, 3.0, 1.0, 0.0, 2.0);
    cs.step = 0.25;
    try {
        IntegratedCurve c(cs);
        FAIL("expected IntegratorStepTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IntegratorStepTooLarge);
    }
    CHECK(curve_with_curvature(exponential_law(0, 0.3, 1.0, 0.0, 2.0))->max_local_error() < 1e-10);
    try {
        curve_with_curvature(exponential_law(0, 0.3, -1.0, 0.0, 2.0));
        FAIL("expected ParamOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParamOutOfRange);
    }
    const auto c = curve_with_curvature(exponential_law(0, 0.3, 1.0, 0.0, 2.0));
    CHECK_THROWS_AS(c->state(2.5), Error);
}

TEST_CASE("spherical curves stay on the sphere") {
    const auto c = curve_with_curvature(exponential_law(1, -0.5, 2.0, 0.0, 2.0));
    for (double s = 0.0; s <= 2.0; s += 0.25) {
        const Eigen::VectorXd y = c->state(s);
        CHECK(std::abs(y.head<3>().norm() - 1.0) < 1e-12);
        CHECK(std::abs(y.head<3>().dot(y.tail<3>())) < 1e-12);
    }
}
