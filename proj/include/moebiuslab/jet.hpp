#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/taylor.hpp"

namespace moebiuslab {

/// Axis-aligned box of closed intervals.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double width(int axis) const { return hi[static_cast<std::size_t>(axis)] - lo[static_cast<std::size_t>(axis)]; }
    double max_width() const;
    Eigen::VectorXd center() const;
    /// True when every coordinate is at least `margin` inside the box.
    bool contains(std::span<const double> x, double margin = 0.0) const;
    Box product(const Box& other) const;
};

/// Chart map evaluated on Taylor expansions of the coordinates.
using ChartMap = std::function<TaylorVector(std::span<const Taylor>)>;

/// A parametrized hypersurface f: domain ⊂ ℝⁿ → ℝⁿ⁺¹.
struct ImmersionSpec {
    std::string name;
    int n = 0;
    Box domain;
    ChartMap eval;
    std::map<std::string, std::string> metadata;

    int ambient_dim() const { return n + 1; }
    /// Plain evaluation of f at a point.
    Eigen::VectorXd position(std::span<const double> x) const;
};

/// Position and all partial derivatives of an immersion at a point, stored as
/// one Taylor expansion per ambient component.
class Jet {
public:
    Jet(Eigen::VectorXd point, TaylorVector components);

    int n() const { return static_cast<int>(point_.size()); }
    int ambient_dim() const { return static_cast<int>(components_.size()); }
    int order() const { return components_.front().order(); }
    const Eigen::VectorXd& point() const { return point_; }
    const TaylorVector& components() const { return components_; }

    Eigen::VectorXd position() const;
    /// ∂_{i1}…∂_{ik} f_component at the base point.
    double partial(int component, std::span<const int> indices) const;
    /// (n+1) × n matrix of first partials.
    Eigen::MatrixXd differential() const;
    /// Dense derivative tensor of order k: (n+1) * n^k entries, component-major.
    std::vector<double> tensor(int k) const;

private:
    Eigen::VectorXd point_;
    TaylorVector components_;
};

/// Taylor-mode jet of `spec` at `x` up to `order` (default 4).
/// Throws PointOutsideDomain or RankDeficient.
Jet evaluate_jet(const ImmersionSpec& spec, std::span<const double> x, int order = 4, double margin = 0.0);

/// Order-4 jet from central finite differences with one Richardson level
/// (steps h and 2h). Independent of the Taylor path; used as a test oracle.
/// Throws StepTooLarge when a stencil leaves the domain.
Jet evaluate_jet_fd(const ImmersionSpec& spec, std::span<const double> x, double h = 1e-2);

/// Max-norm difference of derivative tensors of order k between two jets,
/// divided by max(1, max|tensor of a|).
double relative_tensor_gap(const Jet& a, const Jet& b, int k);

/// Deterministic uniform sample of `count` points with a relative inset from
/// the boundary (0.05 keeps 5% of each side clear).
std::vector<Eigen::VectorXd> sample_points(const Box& box, int count, std::uint64_t seed, double inset = 0.05);

}  // namespace moebiuslab
