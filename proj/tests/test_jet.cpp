#include <doctest.h>

#include <array>
#include <cmath>

#include "moebiuslab/errors.hpp"
#include "moebiuslab/jet.hpp"

using namespace moebiuslab;

namespace {

ImmersionSpec plane4() {
    ImmersionSpec s;
    s.name = "plane";
    s.n = 4;
    s.domain = {{-1, -1, -1, -1}, {1, 1, 1, 1}};
    s.eval = [](std::span<const Taylor> x) {
        TaylorVector out(x.begin(), x.end());
        out.emplace_back(0.0);
        return out;
    };
    return s;
}

ImmersionSpec sphere_graph(int n) {
    ImmersionSpec s;
    s.name = "sphere-graph";
    s.n = n;
    s.domain = {std::vector<double>(static_cast<std::size_t>(n), -0.5), std::vector<double>(static_cast<std::size_t>(n), 0.5)};
    s.eval = [](std::span<const Taylor> x) {
        TaylorVector out(x.begin(), x.end());
        Taylor r2 = x[0] * x[0];
        for (std::size_t i = 1; i < x.size(); ++i) r2 += x[i] * x[i];
        out.push_back(sqrt(1.0 - r2));
        return out;
    };
    return s;
}

}  // namespace

TEST_CASE("affine map has identity differential and vanishing higher partials") {
    const auto spec = plane4();
    const std::array<double, 4> x = {0.1, -0.2, 0.3, 0.05};
    const Jet jet = evaluate_jet(spec, x);
    CHECK(jet.order() == 4);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(5, 4);
    expect.topRows(4).setIdentity();
    CHECK((jet.differential() - expect).norm() == 0.0);
    for (int k = 2; k <= 4; ++k)
        for (double v : jet.tensor(k)) CHECK(v == 0.0);
}

TEST_CASE("unit sphere graph has second partials -delta at the pole") {
    const auto spec = sphere_graph(4);
    const std::array<double, 4> x = {0, 0, 0, 0};
    const Jet jet = evaluate_jet(spec, x);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const std::array<int, 2> idx = {i, j};
            CHECK(jet.partial(4, idx) == doctest::Approx(i == j ? -1.0 : 0.0));
            for (int a = 0; a < 4; ++a) CHECK(jet.partial(a, idx) == 0.0);
        }
}

TEST_CASE("derivative tensors are symmetric in their indices") {
    const auto spec = sphere_graph(3);
    const std::array<double, 3> x = {0.1, -0.2, 0.15};
    const Jet jet = evaluate_jet(spec, x);
    const auto t3 = jet.tensor(3);
    const int n = 3;
    for (int a = 0; a < 4; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    auto at = [&](int p, int q, int r) { return t3[static_cast<std::size_t>(((a * n + p) * n + q) * n + r)]; };
                    const double scale = std::max(1.0, std::abs(at(i, j, k)));
                    CHECK(std::abs(at(i, j, k) - at(k, i, j)) <= 1e-12 * scale);
                    CHECK(std::abs(at(i, j, k) - at(j, i, k)) <= 1e-12 * scale);
                }
}

TEST_CASE("finite-difference oracle: exp fourth derivative") {
    ImmersionSpec s;
    s.name = "exp-graph";
    s.n = 2;
    s.domain = {{-1, -1}, {1, 1}};
    s.eval = [](std::span<const Taylor> x) { return TaylorVector{x[0], x[1], exp(x[0])}; };
    const std::array<double, 2> x = {0.0, 0.0};
    const Jet fd = evaluate_jet_fd(s, x, 1e-2);
    const std::array<int, 4> idx = {0, 0, 0, 0};
    CHECK(std::abs(fd.partial(2, idx) - 1.0) < 1e-6);
    const Jet exact = evaluate_jet(s, x);
    for (int k = 1; k <= 4; ++k) CHECK(relative_tensor_gap(exact, fd, k) < 1e-5);
}

TEST_CASE("finite-difference oracle is exact on affine maps with dyadic steps") {
    ImmersionSpec s;
    s.name = "affine";
    s.n = 2;
    s.domain = {{-1, -1}, {1, 1}};
    s.eval = [](std::span<const Taylor> x) { return TaylorVector{x[0] + 0.5 * x[1], x[1], 0.25 * x[0] - 2.0 * x[1] + 1.0}; };
    const std::array<double, 2> x = {0.25, -0.125};
    const Jet fd = evaluate_jet_fd(s, x, 1.0 / 128);
    for (int k = 2; k <= 4; ++k)
        for (double v : fd.tensor(k)) CHECK(v == 0.0);
}

TEST_CASE("jet evaluation errors") {
    const auto spec = plane4();
    const std::array<double, 4> outside = {1.5, 0, 0, 0};
    try {
        evaluate_jet(spec, outside);
        FAIL("expected PointOutsideDomain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PointOutsideDomain);
    }
    const std::array<double, 4> near_edge = {0.97, 0, 0, 0};
    try {
        evaluate_jet_fd(spec, near_edge, 1e-2);
        FAIL("expected StepTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepTooLarge);
    }

    ImmersionSpec fold;
    fold.name = "fold";
    fold.n = 2;
    fold.domain = {{-1, -1}, {1, 1}};
    fold.eval = [](std::span<const Taylor> x) { return TaylorVector{x[0], x[0] * x[0], x[0] * x[0] * x[0]}; };
    const std::array<double, 2> p = {0.2, 0.1};
    try {
        evaluate_jet(fold, p);
        FAIL("expected RankDeficient");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficient);
    }
}

TEST_CASE("sample points are deterministic and respect the inset") {
    const Box box{{0.0, -2.0}, {1.0, 2.0}};
    const auto a = sample_points(box, 64, 99);
    const auto b = sample_points(box, 64, 99);
    const auto c = sample_points(box, 64, 100);
    REQUIRE(a.size() == 64);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((a[i] - b[i]).norm() == 0.0);
        differs = differs || (a[i] - c[i]).norm() > 0.0;
        CHECK(a[i](0) >= 0.05);
        CHECK(a[i](0) <= 0.95);
        CHECK(a[i](1) >= -1.8);
        CHECK(a[i](1) <= 1.8);
    }
    CHECK(differs);
}
