#pragma once

#include <map>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "moebiuslab/jet.hpp"
#include "moebiuslab/linalg.hpp"

namespace moebiuslab {

/// A surface chart in the model of the space form Q³_c:
/// ℝ³ (c = 0), the unit sphere S³ ⊂ ℝ⁴ (c = 1), or the upper half-space
/// ℍ³ = {z₃ > 0} with metric |dz|²/z₃² (c = −1).
struct SurfaceSpec {
    std::string name;
    int c = 0;
    Box domain;
    ChartMap eval;
    std::map<std::string, std::string> params;

    int model_dim() const { return c == 1 ? 4 : 3; }
    Eigen::VectorXd position(std::span<const double> x) const;
};

/// Second-order geometry of a surface in its model, carried as Taylor
/// expansions about the base point (order = jet order − 2).
struct SurfaceGeometry {
    TaylorMatrix metric;  ///< induced metric ds² in the model metric
    TaylorMatrix shape;   ///< shape operator in the model metric
    Taylor H;             ///< mean curvature, tr(shape)/2
    Taylor K;             ///< intrinsic Gaussian curvature, det(shape) + c
    Eigen::VectorXd point;
    /// Unit normal in the model metric, as an ambient vector at the point.
    Eigen::VectorXd normal;
    Eigen::Vector2d principal;  ///< ascending
};

SurfaceGeometry surface_geometry(const SurfaceSpec& spec, std::span<const double> x, int order = 4);

}  // namespace moebiuslab
