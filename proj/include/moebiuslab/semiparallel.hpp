#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/invariants.hpp"
#include "moebiuslab/surface.hpp"

namespace moebiuslab {

struct Cluster {
    double lambda = 0.0;  ///< mean λ̄ over the cluster
    int multiplicity = 0;
    double width = 0.0;
    double theta = 0.0;      ///< mean θ over the cluster
    double invariant = 0.0;  ///< λ̄² + 2θ from the means
    std::vector<int> members;  ///< indices into the sorted spectrum
};

struct SpectrumReport {
    std::vector<Cluster> clusters;  ///< ascending in λ̄
    double separation = 0.0;        ///< smallest gap between adjacent clusters
    bool indeterminate = false;     ///< some width ≥ 0.1·separation

    std::vector<int> multiplicities() const;
};

inline constexpr double kDefaultClusterTol = 1e-6;
inline constexpr double kDefaultVerdictTol = 1e-6;

/// Greedy gap clustering of an ascending spectrum. A new cluster starts when
/// the gap exceeds tol_cluster·max(1, spectral radius).
/// Throws DegenerateSpectrum when everything lands in one cluster.
SpectrumReport cluster_spectrum(const Eigen::VectorXd& lambda_bar, const Eigen::VectorXd& theta,
                                double tol_cluster = kDefaultClusterTol);

/// max over an orthonormal frame of ||R*(X_i,X_j)(BX_k) − B(R*(X_i,X_j)X_k)||*.
double semiparallel_direct(const MoebiusData& md);

/// max over distinct cluster pairs of |λ̄_i λ̄_j + θ_i + θ_j|.
/// Throws IndeterminateSpectrum for an indeterminate report.
double semiparallel_spectral(const SpectrumReport& report);

enum class Verdict { SemiParallel, NotSemiParallel, Indeterminate };

std::string_view to_string(Verdict v);

struct SemiparallelVerdict {
    double direct = 0.0;
    double spectral = 0.0;
    double tol = kDefaultVerdictTol;
    Verdict verdict = Verdict::Indeterminate;
    std::string diagnostic;

    bool operator==(const SemiparallelVerdict&) const = default;
};

/// SemiParallel iff both residuals < tol; NotSemiParallel iff both > 10·tol.
SemiparallelVerdict verdict(double direct, double spectral, double tol = kDefaultVerdictTol);

struct WarpedResidual {
    int cluster = 0;
    double residual = 0.0;
};

/// Central differences of λ̄² + 2θ along the eigendirections of every cluster
/// of multiplicity ≥ 2, with coordinate step 1e-4·(largest domain width).
/// Clusters of multiplicity 1 are skipped.
std::vector<WarpedResidual> check_warped_product(const ImmersionSpec& spec, std::span<const double> x,
                                               const MoebiusData& md, const SpectrumReport& report,
                                               double tol_cluster = kDefaultClusterTol);

struct CondMResidual {
    double mu = 0.0;
    double K = 0.0;
    double cond_i = 0.0;
    double cond_ii = 0.0;
};

/// Conditions on μ = √(4H² − (2n/(n−1))(K − c)) for a surface in Q³_c:
/// (i) ||grad μ⁻¹||² + K μ⁻² and (ii) Hess μ⁻¹ + K μ⁻¹ ds² (max entry in an
/// orthonormal frame). Throws NonRealMu when the radicand is not positive.
CondMResidual check_cond_m(const SurfaceSpec& surface, std::span<const double> x, int n);

}  // namespace moebiuslab
