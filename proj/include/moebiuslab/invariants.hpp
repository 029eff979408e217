#pragma once

#include <span>

#include <Eigen/Dense>

#include "moebiuslab/jet.hpp"
#include "moebiuslab/linalg.hpp"

namespace moebiuslab {

/// Euclidean invariants of a hypersurface at one point (coordinate frame).
struct ClassicalData {
    Eigen::MatrixXd g;
    Eigen::VectorXd N;
    Eigen::MatrixXd h;
    Eigen::MatrixXd A;
    double H = 0.0;
    double alpha_norm2 = 0.0;
};

ClassicalData classical_data(const Jet& jet, bool flip_normal = false);

/// Moebius conformal factor; throws UmbilicPoint when ||α||² − nH² is below
/// 1e-10·max(||α||², 1).
double rho(const ClassicalData& cd, int n);

struct ShapeOperator {
    Eigen::MatrixXd B;
    Eigen::VectorXd lambda_bar;  ///< ascending
    Eigen::MatrixXd eigenframe;  ///< g-orthonormal columns
};

ShapeOperator moebius_shape_operator(const ClassicalData& cd, double rho);

/// Residuals of the identities and structure equations at one point, all
/// measured in a g*-orthonormal frame.
struct StructureResiduals {
    double trace_B = 0.0;
    double norm_B = 0.0;
    double trace_psi = 0.0;
    double gauss = 0.0;
    double codazzi_B = 0.0;
    double codazzi_psi = 0.0;  ///< NaN when the jet order is below 5
    double ricci = 0.0;
    double bianchi = 0.0;
};

/// Everything Moebius-geometric at one point.
///
/// Coordinate-frame tensors carry the suffix-free names; `frame` is the
/// Gram-Schmidt g*-orthonormal frame (columns) and the `_f` members are the
/// same tensors expressed in it. `eigenframe` columns are g*-orthonormal
/// eigenvectors of B in coordinates, ordered like `lambda_bar`.
struct MoebiusData {
    int n = 0;
    ClassicalData classical;
    double rho = 0.0;
    Eigen::MatrixXd g_star;
    Eigen::MatrixXd B;
    Eigen::MatrixXd psi;
    Eigen::VectorXd omega;
    Eigen::MatrixXd d_omega;
    Eigen::VectorXd grad_rho;
    Tensor4 R;  ///< R^l_{kij} in coordinates

    Eigen::MatrixXd frame;
    Eigen::MatrixXd B_f;
    Eigen::MatrixXd psi_f;
    Tensor4 R_f;

    Eigen::VectorXd lambda_bar;
    Eigen::VectorXd theta;
    Eigen::MatrixXd eigenframe;
    double s_star = 0.0;
    /// ||[ψ̂,B]|| / (||ψ̂||·||B||) in the orthonormal frame.
    double commutator_ratio = 0.0;
    bool commutes = true;

    StructureResiduals residuals;
};

struct InvariantOptions {
    bool flip_normal = false;
    /// Adds ε·diag(1..n) to B before the Codazzi-B residual is formed.
    double codazzi_perturbation = 0.0;
};

/// Needs a jet of order ≥ 4; order 5 also yields the ψ̂ Codazzi residual.
MoebiusData moebius_data(const Jet& jet, const InvariantOptions& opts = {});

/// Order-5 Taylor jet followed by moebius_data.
MoebiusData evaluate_moebius(const ImmersionSpec& spec, std::span<const double> x, const InvariantOptions& opts = {});

inline constexpr int kInvariantJetOrder = 5;

/// Sectional curvature of the Moebius metric on span{X, Y} (coordinate vectors).
double sectional_curvature(const MoebiusData& md, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

}  // namespace moebiuslab
