#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/classifier.hpp"
#include "moebiuslab/errors.hpp"

using namespace moebiuslab;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidSpecFile;
}

SampleConfig small(int points = 12) {
    SampleConfig cfg;
    cfg.point_count = points;
    return cfg;
}

}  // namespace

TEST_CASE("sample config validation") {
    SampleConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.point_count = 7;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::InsufficientSamples);
    cfg = {};
    cfg.tol_verdict = 0.0;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::ParamOutOfRange);
    cfg = {};
    cfg.inset = 0.5;
    CHECK(code_of([&] { validate(cfg); }) == ErrorCode::ParamOutOfRange);
    CHECK(code_of([] { classify(make_entry("cylinder"), small(1)); }) == ErrorCode::InsufficientSamples);
}

TEST_CASE("constancy table") {
    const auto single = constancy_table({{"x", {0.25}}, {"y", {-3.0}}}, 1e-6);
    REQUIRE(single.size() == 2);
    for (const auto& s : single) {
        CHECK(s.spread == 0.0);
        CHECK(s.constant);
    }
    const auto spread = constancy_table({{"x", {1.0, 1.5, 0.5}}}, 0.1);
    CHECK(spread[0].min == 0.5);
    CHECK(spread[0].max == 1.5);
    CHECK(spread[0].spread == 1.0);
    CHECK_FALSE(spread[0].constant);
}

TEST_CASE("parallel_for visits each index once") {
    std::vector<int> hits(97, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK(worker_count(1) == 1);
}

TEST_CASE("classification is deterministic across thread counts") {
    const ImmersionSpec spec = make_entry("cone-clifford?r=0.7071067811865476&n=4");
    const ClassificationReport a = classify(spec, small());
    const ClassificationReport b = classify(spec, small());
    CHECK(a == b);
    setenv("MOEBIUSLAB_THREADS", "1", 1);
    const ClassificationReport c = classify(spec, small());
    unsetenv("MOEBIUSLAB_THREADS");
    CHECK(a == c);
}

TEST_CASE("fixture branches") {
    struct Case {
        const char* entry;
        const char* branch;
    };
    const Case cases[] = {
        {"cone-clifford?r=0.7071067811865476&n=5", branch::kConeClifford},
        {"rot-hypcyl?r=0.5&n=4", branch::kRotHypCylinder},
        {"cylinder?k=2&n=4", branch::kTwoCurvI},
        {"cone?k=1&n=4", branch::kTwoCurvII},
        {"torus?k=2&n=4&r=0.6", branch::kTwoCurvIII},
        {"cone-product", branch::kMoebiusParallel},
        {"graph", branch::kNotSemiParallel},
        {"cone-clifford-ellipsoid", branch::kNotSemiParallel},
    };
    for (const auto& c : cases) {
        CAPTURE(c.entry);
        const auto rep = classify(make_entry(c.entry), small());
        CHECK(rep.branch == c.branch);
        CHECK(rep.point_errors.empty());
    }
}

TEST_CASE("branch invariance under inversion") {
    const ImmersionSpec spec = make_entry("rot-hypcyl?r=1&n=5");
    Eigen::VectorXd center = Eigen::VectorXd::Zero(6);
    center(0) = 0.3;
    center(5) = -2.5;
    const auto a = classify(spec, small());
    const auto b = classify(invert(spec, center), small());
    CHECK(a.branch == b.branch);
    CHECK(a.multiplicities.size() == b.multiplicities.size());
}

TEST_CASE("curve-based two-cluster report") {
    const auto rep = classify(make_entry("cyl-spiral?a=0.3&b=1&n=4"), small());
    CHECK(rep.verdict.verdict == Verdict::SemiParallel);
    CHECK(rep.cluster_count == 2);
    CHECK(rep.branch == branch::kTwoCurvIV);
    CHECK(rep.omega_max > 1e-3);

    ImmersionSpec anonymous = make_entry("cyl-spiral?a=0.3&b=1&n=4");
    anonymous.metadata.erase(kMetaBranch);
    CHECK(classify(anonymous, small()).branch == branch::kTwoCurvCurve);
}

TEST_CASE("three-cluster constants") {
    const auto rep = classify(make_entry("cone-clifford?r=0.7071067811865476&n=4"), small());
    REQUIRE(rep.clusters.size() == 3);
    for (const auto& s : rep.constancy) {
        CAPTURE(s.quantity);
        CHECK(s.spread < 1e-6);
    }
    for (const auto& c : rep.clusters) CHECK(std::abs(c.invariant) > 1e-6);
}
