#include "moebiuslab/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

namespace {

constexpr std::array<double, kMaxTaylorOrder + 1> kFactorial = {1, 1, 2, 6, 24, 120, 720};

template <class T>
std::vector<T> frenet(int c, const std::vector<T>& y, const T& kappa) {
    using std::cos;
    using std::sin;
    switch (c) {
        case 0:
            return {cos(y[2]), sin(y[2]), kappa};
        case 1: {
            // γ' = T, T' = −γ + κ γ×T on the unit sphere.
            const T cx = y[1] * y[5] - y[2] * y[4];
            const T cy = y[2] * y[3] - y[0] * y[5];
            const T cz = y[0] * y[4] - y[1] * y[3];
            return {y[3], y[4], y[5], kappa * cx - y[0], kappa * cy - y[1], kappa * cz - y[2]};
        }
        default:
            // Hyperbolic arclength in the upper half-plane; κ_h = z κ_e + cos φ.
            return {y[1] * cos(y[2]), y[1] * sin(y[2]), kappa - cos(y[2])};
    }
}

}  // namespace

CurveSpec exponential_law(int c, double a, double b, double s_lo, double s_hi) {
    CurveSpec s;
    s.name = "exp";
    s.c = c;
    s.kappa = [a, b](const Taylor& t) { return b * exp(a * t); };
    s.s_lo = s_lo;
    s.s_hi = s_hi;
    return s;
}

CurveSpec sqrt_law(int c, double cc, double b, double s_lo, double s_hi) {
    CurveSpec s;
    s.name = "sqrt";
    s.c = c;
    s.kappa = [cc, b](const Taylor& t) { return pow(cc * t + b, -0.5); };
    s.s_lo = s_lo;
    s.s_hi = s_hi;
    return s;
}

IntegratedCurve::IntegratedCurve(CurveSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.s_hi > spec_.s_lo) || !(spec_.step > 0.0))
        throw Error(ErrorCode::ParamOutOfRange, spec_.name + ": empty arclength interval");
    const int steps = static_cast<int>(std::ceil((spec_.s_hi - spec_.s_lo) / spec_.step));
    spec_.step = (spec_.s_hi - spec_.s_lo) / steps;
    grid_lo_ = spec_.s_lo;

    Eigen::VectorXd y;
    switch (spec_.c) {
        case 0: y = Eigen::Vector3d(0.0, 0.0, spec_.phi0); break;
        case 1: {
            y.resize(6);
            y << 1.0, 0.0, 0.0, 0.0, std::cos(spec_.phi0), std::sin(spec_.phi0);
            break;
        }
        case -1: y = Eigen::Vector3d(0.0, 1.0, spec_.phi0); break;
        default: throw Error(ErrorCode::ParamOutOfRange, spec_.name + ": curvature of the model must be 0, 1 or -1");
    }
    checkpoints_.reserve(static_cast<std::size_t>(steps) + 1);
    checkpoints_.push_back(y);
    const double h = spec_.step;
    for (int k = 0; k < steps; ++k) {
        const double s = grid_lo_ + k * h;
        if (spec_.kappa(Taylor(s)).value() <= 0.0)
            throw Error(ErrorCode::ParamOutOfRange, spec_.name + ": curvature must stay positive");
        const Eigen::VectorXd full = rk4_step(y, s, h);
        const Eigen::VectorXd half = rk4_step(rk4_step(y, s, 0.5 * h), s + 0.5 * h, 0.5 * h);
        max_local_error_ = std::max(max_local_error_, (full - half).cwiseAbs().maxCoeff() * 16.0 / 15.0);
        y = half;
        if (spec_.c == 1) {
            Eigen::Vector3d g = y.head<3>().normalized();
            Eigen::Vector3d t = y.tail<3>();
            t = (t - t.dot(g) * g).normalized();
            y << g, t;
        }
        checkpoints_.push_back(y);
    }
    if (max_local_error_ > 1e-10)
        throw Error(ErrorCode::IntegratorStepTooLarge, spec_.name + ": local truncation error above 1e-10");
}

Eigen::VectorXd IntegratedCurve::rhs(const Eigen::VectorXd& y, double s) const {
    const std::vector<double> v(y.data(), y.data() + y.size());
    const auto f = frenet<double>(spec_.c, v, spec_.kappa(Taylor(s)).value());
    return Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

Eigen::VectorXd IntegratedCurve::rk4_step(const Eigen::VectorXd& y, double s, double h) const {
    const Eigen::VectorXd k1 = rhs(y, s);
    const Eigen::VectorXd k2 = rhs(y + 0.5 * h * k1, s + 0.5 * h);
    const Eigen::VectorXd k3 = rhs(y + 0.5 * h * k2, s + 0.5 * h);
    const Eigen::VectorXd k4 = rhs(y + h * k3, s + h);
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd IntegratedCurve::state(double s) const {
    const double tol = 1e-12 * (spec_.s_hi - spec_.s_lo);
    if (s < spec_.s_lo - tol || s > spec_.s_hi + tol)
        throw Error(ErrorCode::PointOutsideDomain, spec_.name + ": arclength outside the integrated interval");
    const auto last = static_cast<long>(checkpoints_.size()) - 1;
    const long k = std::clamp(std::lround((s - grid_lo_) / spec_.step), 0L, last);
    const double sk = grid_lo_ + static_cast<double>(k) * spec_.step;
    if (s == sk) return checkpoints_[static_cast<std::size_t>(k)];
    return rk4_step(checkpoints_[static_cast<std::size_t>(k)], sk, s - sk);
}

std::vector<Taylor> IntegratedCurve::expand(const Eigen::VectorXd& y0, double s0, int order) const {
    const Taylor S = Taylor::variable(1, order, 0, s0);
    const Taylor kappa = spec_.kappa(S);
    std::vector<Taylor> y;
    for (Eigen::Index i = 0; i < y0.size(); ++i) y.push_back(Taylor::constant(1, order, y0(i)));
    // Picard iteration gains one correct coefficient per pass.
    for (int pass = 0; pass <= order; ++pass) {
        const auto f = frenet<Taylor>(spec_.c, y, kappa);
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto out = y[i].coeffs();
            const auto in = f[i].coeffs();
            for (int j = order - 1; j >= 0; --j)
                out[static_cast<std::size_t>(j) + 1] = in[static_cast<std::size_t>(j)] / (j + 1);
        }
    }
    return y;
}

TaylorVector IntegratedCurve::position(const Taylor& s) const {
    const Eigen::VectorXd y0 = state(s.value());
    const int dim = model_dim();
    const std::array<int, 3> comps = spec_.c == 1 ? std::array<int, 3>{0, 1, 2} : std::array<int, 3>{0, 1, -1};
    TaylorVector out;
    if (s.is_constant()) {
        for (int a = 0; a < dim; ++a) out.emplace_back(y0(comps[static_cast<std::size_t>(a)]));
        return out;
    }
    const int order = s.order();
    const auto y = expand(y0, s.value(), order);
    std::vector<double> derivs(static_cast<std::size_t>(order) + 1);
    for (int a = 0; a < dim; ++a) {
        const auto coeffs = y[static_cast<std::size_t>(comps[static_cast<std::size_t>(a)])].coeffs();
        for (int k = 0; k <= order; ++k)
            derivs[static_cast<std::size_t>(k)] = kFactorial[static_cast<std::size_t>(k)] * coeffs[static_cast<std::size_t>(k)];
        out.push_back(s.compose(derivs));
    }
    return out;
}

std::shared_ptr<const IntegratedCurve> curve_with_curvature(CurveSpec spec) {
    return std::make_shared<const IntegratedCurve>(std::move(spec));
}

}  // namespace moebiuslab
