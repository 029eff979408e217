#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/jet.hpp"
#include "moebiuslab/semiparallel.hpp"

namespace moebiuslab {

struct SampleConfig {
    int point_count = 32;
    std::uint64_t seed = 7;
    double tol_cluster = kDefaultClusterTol;
    double tol_verdict = kDefaultVerdictTol;
    double tol_constancy = 1e-6;
    double inset = 0.05;

    bool operator==(const SampleConfig&) const = default;
};

/// Throws InsufficientSamples below 8 points, ParamOutOfRange for
/// non-positive tolerances or an inset outside [0, 0.5).
void validate(const SampleConfig& cfg);

/// Worker count: MOEBIUSLAB_THREADS if set and positive, else the hardware
/// concurrency, never more than `tasks`.
int worker_count(std::size_t tasks);

/// Runs fn(i) for i in [0, count) on worker_count(count) threads. Each index
/// runs exactly once; results must be written to per-index slots.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Everything measured at one sample point.
struct PointSample {
    Eigen::VectorXd x;
    std::string error;  ///< non-empty when evaluation failed
    Eigen::VectorXd lambda_bar;
    Eigen::VectorXd theta;
    double s_star = 0.0;
    double omega_norm = 0.0;  ///< |ω|* in the Moebius metric
    StructureResiduals residuals;
    SpectrumReport spectrum;
    double direct = 0.0;
    double spectral = 0.0;
    double warped = 0.0;  ///< max over clusters of multiplicity ≥ 2; 0 if none
};

/// Evaluates one point. Errors from the library are caught into `error`.
PointSample sample_point(const ImmersionSpec& spec, const Eigen::VectorXd& x, const SampleConfig& cfg,
                         bool with_warped);

struct Spread {
    std::string quantity;
    double min = 0.0;
    double max = 0.0;
    double spread = 0.0;
    bool constant = true;

    bool operator==(const Spread&) const = default;
};

/// Max − min of each named series; constant iff spread < tol.
std::vector<Spread> constancy_table(const std::vector<std::pair<std::string, std::vector<double>>>& series, double tol);

struct ClusterSummary {
    int multiplicity = 0;
    double lambda = 0.0;     ///< mean over points
    double theta = 0.0;      ///< mean over points
    double invariant = 0.0;  ///< mean of λ̄² + 2θ over points

    bool operator==(const ClusterSummary&) const = default;
};

struct ResidualStats {
    std::string check;
    double max = 0.0;
    double median = 0.0;

    bool operator==(const ResidualStats&) const = default;
};

struct ClassificationReport {
    std::string spec_name;
    std::map<std::string, std::string> metadata;
    int n = 0;
    SampleConfig config;
    int points_evaluated = 0;
    std::vector<std::string> point_errors;

    int cluster_count = 0;
    std::vector<int> multiplicities;
    bool matching_stable = false;
    /// Largest cross-point spread of a matched cluster's λ̄, relative to the
    /// smallest cluster separation seen.
    double matching_quality = 0.0;
    std::vector<ClusterSummary> clusters;

    SemiparallelVerdict verdict;
    Verdict direct_route = Verdict::Indeterminate;
    Verdict spectral_route = Verdict::Indeterminate;
    double warped_max = 0.0;
    double omega_max = 0.0;

    std::vector<Spread> constancy;
    std::vector<ResidualStats> residuals;

    std::string branch;
    std::vector<std::string> notes;
    std::string diagnostic;

    bool operator==(const ClassificationReport&) const = default;
};

/// Branch labels.
namespace branch {
inline constexpr const char* kTwoCurvI = "TwoCurv-i";
inline constexpr const char* kTwoCurvII = "TwoCurv-ii";
inline constexpr const char* kTwoCurvIII = "TwoCurv-iii";
inline constexpr const char* kTwoCurvIV = "TwoCurv-iv";
inline constexpr const char* kTwoCurvV = "TwoCurv-v";
inline constexpr const char* kTwoCurvCurve = "TwoCurv-curve-type";
inline constexpr const char* kConeClifford = "ThreeCurv-ConeClifford";
inline constexpr const char* kRotHypCylinder = "ThreeCurv-RotHypCylinder";
inline constexpr const char* kMoebiusParallel = "ThreeCurv-MoebiusParallel";
inline constexpr const char* kNotSemiParallel = "NotSemiParallel";
inline constexpr const char* kIndeterminate = "Indeterminate";
}  // namespace branch

/// Samples cfg.point_count points, evaluates them in parallel and decides the
/// branch. Deterministic given (spec, cfg). Throws InsufficientSamples.
ClassificationReport classify(const ImmersionSpec& spec, const SampleConfig& cfg = {});

}  // namespace moebiuslab
