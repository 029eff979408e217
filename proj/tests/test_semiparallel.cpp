#include <doctest.h>

#include <cmath>
#include <numbers>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/errors.hpp"
#include "moebiuslab/semiparallel.hpp"

using namespace moebiuslab;

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidSpecFile;
}

}  // namespace

TEST_CASE("gap clustering") {
    const auto rep = cluster_spectrum(vec({-0.6, 0.0, 1e-9, 0.6}), vec({0.1, -0.2, -0.4, 0.3}));
    REQUIRE(rep.clusters.size() == 3);
    CHECK(rep.multiplicities() == std::vector<int>{1, 2, 1});
    CHECK(rep.clusters[1].width == doctest::Approx(1e-9));
    CHECK(rep.clusters[1].theta == doctest::Approx(-0.3));
    CHECK(rep.clusters[1].invariant == doctest::Approx(-0.6));
    CHECK(rep.separation == doctest::Approx(0.6));
    CHECK_FALSE(rep.indeterminate);

    // A cluster whose width is comparable to the smallest gap is flagged.
    const auto loose = cluster_spectrum(vec({0.0, 5e-7, 1e-6, 1.5e-6, 4e-6}), vec({0, 0, 0, 0, 0}));
    CHECK(loose.indeterminate);
    CHECK(code_of([&] { semiparallel_spectral(loose); }) == ErrorCode::IndeterminateSpectrum);

    CHECK(code_of([] { cluster_spectrum(vec({0.1, 0.1, 0.1}), vec({0, 0, 0})); }) == ErrorCode::DegenerateSpectrum);
}

TEST_CASE("verdict hysteresis") {
    CHECK(verdict(1e-9, 2e-9).verdict == Verdict::SemiParallel);
    CHECK(verdict(1e-3, 2e-2).verdict == Verdict::NotSemiParallel);
    const auto mid = verdict(5e-6, 1e-9);
    CHECK(mid.verdict == Verdict::Indeterminate);
    CHECK_FALSE(mid.diagnostic.empty());
    CHECK(verdict(1e-9, 1e-3).verdict == Verdict::Indeterminate);
    CHECK(to_string(Verdict::NotSemiParallel) == "NotSemiParallel");
}

TEST_CASE("clifford cone satisfies both semi-parallel routes with closed-form constants") {
    const ImmersionSpec spec = make_entry("cone-clifford?n=4");
    const double a = std::sqrt(3.0 / 8.0);
    for (const auto& x : sample_points(spec.domain, 8, 21)) {
        const MoebiusData md = evaluate_moebius(spec, as_span(x));
        const SpectrumReport rep = cluster_spectrum(md.lambda_bar, md.theta);
        REQUIRE(rep.multiplicities() == std::vector<int>{1, 2, 1});
        CHECK(rep.clusters[0].lambda == doctest::Approx(-a).epsilon(1e-10));
        CHECK(rep.clusters[2].lambda == doctest::Approx(a).epsilon(1e-10));
        CHECK(rep.clusters[1].invariant == doctest::Approx(-3.0 / 8.0).epsilon(1e-10));
        CHECK(semiparallel_direct(md) < 1e-10);
        CHECK(semiparallel_spectral(rep) < 1e-10);
        for (const auto& w : check_warped_product(spec, as_span(x), md, rep)) CHECK(w.residual < 1e-5);
    }
}

TEST_CASE("generic graph fails both routes") {
    const ImmersionSpec spec = make_entry("graph");
    for (const auto& x : sample_points(spec.domain, 6, 2)) {
        const MoebiusData md = evaluate_moebius(spec, as_span(x));
        const SpectrumReport rep = cluster_spectrum(md.lambda_bar, md.theta);
        CHECK(semiparallel_direct(md) > 1e-3);
        CHECK(semiparallel_spectral(rep) > 1e-3);
    }
}

TEST_CASE("warped-product derivatives on a curve family") {
    const ImmersionSpec spec = make_entry("cyl-spiral");
    for (const auto& x : sample_points(spec.domain, 4, 9)) {
        const MoebiusData md = evaluate_moebius(spec, as_span(x));
        const SpectrumReport rep = cluster_spectrum(md.lambda_bar, md.theta);
        const auto w = check_warped_product(spec, as_span(x), md, rep);
        REQUIRE(w.size() == 1);
        CHECK(w.front().residual < 1e-5);
    }
}

TEST_CASE("cond-m on isoparametric flat surfaces") {
    SUBCASE("clifford torus") {
        const SurfaceSpec g = clifford_torus(std::numbers::sqrt2 / 2.0);
        for (const auto& x : sample_points(g.domain, 8, 4)) {
            const CondMResidual r = check_cond_m(g, as_span(x), 4);
            // H = 0, K = 0: μ² = (2n/(n−1))·1.
            CHECK(r.mu == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-12));
            CHECK(r.cond_i < 1e-8);
            CHECK(r.cond_ii < 1e-8);
        }
    }
    SUBCASE("hyperbolic cylinder") {
        const double r = 1.0;
        const double t = r / std::sqrt(1.0 + r * r);
        const double H = 0.5 * (t + 1.0 / t);
        const SurfaceSpec g = hyperbolic_cylinder(r);
        for (const auto& x : sample_points(g.domain, 8, 4)) {
            const CondMResidual res = check_cond_m(g, as_span(x), 5);
            CHECK(res.mu == doctest::Approx(std::sqrt(4.0 * H * H - 2.5)).epsilon(1e-10));
            CHECK(res.cond_i < 1e-8);
            CHECK(res.cond_ii < 1e-8);
        }
    }
    SUBCASE("non-flat surface violates (i)") {
        const SurfaceSpec g = torus_of_revolution(2.0, 1.0);
        const CondMResidual res = check_cond_m(g, std::vector<double>{0.3, 0.2}, 4);
        CHECK(res.cond_i > 1e-3);
    }
    SUBCASE("totally geodesic sphere has no real μ") {
        SurfaceSpec g = clifford_torus(0.5);
        g.eval = [](std::span<const Taylor> x) {
            return TaylorVector{cos(x[0]) * cos(x[1]), sin(x[0]) * cos(x[1]), sin(x[1]), Taylor(0.0)};
        };
        g.domain = Box{{-1.0, -1.0}, {1.0, 1.0}};
        CHECK(code_of([&] { check_cond_m(g, std::vector<double>{0.1, 0.2}, 4); }) == ErrorCode::NonRealMu);
    }
}
