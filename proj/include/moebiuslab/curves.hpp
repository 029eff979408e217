#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/taylor.hpp"

namespace moebiuslab {

/// Curve in Q²_c parametrized by arclength with prescribed curvature.
///
/// c = 0: the plane ℝ²; c = 1: the unit sphere S² ⊂ ℝ³; c = −1: the upper
/// half-plane {(x, z): z > 0} with metric (dx² + dz²)/z².
struct CurveSpec {
    std::string name;
    int c = 0;
    /// κ(s), evaluated on Taylor expansions so curve jets can be formed.
    std::function<Taylor(const Taylor&)> kappa;
    double s_lo = 0.0;
    double s_hi = 1.0;
    /// Initial direction angle; used for c = 0 and c = −1.
    double phi0 = 0.0;
    double step = 1e-3;
};

CurveSpec exponential_law(int c, double a, double b, double s_lo, double s_hi);
CurveSpec sqrt_law(int c, double cc, double b, double s_lo, double s_hi);

/// Integrated curve: fixed-step RK4 checkpoints plus local Taylor-mode
/// expansion of the Frenet system, so positions can be evaluated on Taylor
/// arguments (jets).
class IntegratedCurve {
public:
    /// Throws IntegratorStepTooLarge when the step-doubling estimate of the
    /// local truncation error exceeds 1e-10.
    explicit IntegratedCurve(CurveSpec spec);

    const CurveSpec& spec() const { return spec_; }
    int model_dim() const { return spec_.c == 1 ? 3 : 2; }

    /// ODE state at arclength s: c=0 (x, y, φ); c=1 (γ, T); c=−1 (x, z, φ).
    Eigen::VectorXd state(double s) const;
    /// Curve point in the model for a Taylor-valued arclength.
    TaylorVector position(const Taylor& s) const;
    double max_local_error() const { return max_local_error_; }

private:
    Eigen::VectorXd rk4_step(const Eigen::VectorXd& y, double s, double h) const;
    Eigen::VectorXd rhs(const Eigen::VectorXd& y, double s) const;
    std::vector<Taylor> expand(const Eigen::VectorXd& y0, double s0, int order) const;

    CurveSpec spec_;
    double grid_lo_ = 0.0;
    std::vector<Eigen::VectorXd> checkpoints_;
    double max_local_error_ = 0.0;
};

std::shared_ptr<const IntegratedCurve> curve_with_curvature(CurveSpec spec);

}  // namespace moebiuslab
