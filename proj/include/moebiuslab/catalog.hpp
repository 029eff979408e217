#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "moebiuslab/curves.hpp"
#include "moebiuslab/jet.hpp"
#include "moebiuslab/surface.hpp"

namespace moebiuslab {

// Surfaces in space forms.

/// S¹(r)×S¹(√(1−r²)) ⊂ S³, chart (u, v) ∈ [0.1, 6]².
SurfaceSpec clifford_torus(double r);
/// Equidistant cylinder S¹(r)×ℍ¹(√(1+r²)) ⊂ ℍ³ around the z₃-axis:
/// (s, φ) ↦ eˢ(r cos φ, r sin φ, 1).
SurfaceSpec hyperbolic_cylinder(double r);
/// Cylinder over a plane curve: (s, v) ↦ (γ(s), v) ⊂ ℝ³.
SurfaceSpec curve_cylinder_surface(std::shared_ptr<const IntegratedCurve> curve);
/// Suspension of a spherical curve: (s, v) ↦ (cos v·γ(s), sin v) ⊂ S³.
SurfaceSpec curve_suspension_surface(std::shared_ptr<const IntegratedCurve> curve);
/// Rotation of a half-plane curve: (s, v) ↦ (x(s), z(s) sin v, z(s) cos v) ⊂ ℍ³.
SurfaceSpec curve_rotation_surface(std::shared_ptr<const IntegratedCurve> curve);
/// Torus of revolution in ℝ³ with radii R > a.
SurfaceSpec torus_of_revolution(double R, double a);

// Constructions over a surface, producing hypersurfaces of ℝⁿ⁺¹.

/// f(x, u) = (g(x), u), u ∈ [−1, 1]ⁿ⁻². Needs g.c = 0.
ImmersionSpec make_cylinder(const SurfaceSpec& g, int n);
/// f(x, t, y) = (t g(x), y), t ∈ [0.5, 2], y ∈ [−1, 1]ⁿ⁻³. Needs g.c = 1.
ImmersionSpec make_cone(const SurfaceSpec& g, int n);
/// f(x, w) = (z₁, z₂, z₃ σ(w)) with σ the inverse stereographic chart of
/// Sⁿ⁻², w ∈ [−1, 1]ⁿ⁻². Needs g.c = −1.
ImmersionSpec make_rotational(const SurfaceSpec& g, int n);

// Standard products.

/// Sᵏ × ℝⁿ⁻ᵏ.
ImmersionSpec standard_cylinder(int k, int n);
/// Cone over Sᵏ(r) ⊂ Sᵏ⁺¹, Moebius equivalent to Sᵏ × ℍⁿ⁻ᵏ.
ImmersionSpec standard_cone(int k, int n, double r);
/// Sᵏ(r) × Sⁿ⁻ᵏ(√(1−r²)) ⊂ Sⁿ⁺¹ pulled to ℝⁿ⁺¹ by stereographic projection.
ImmersionSpec standard_torus(int k, int n, double r);
/// Cone over Sᵖ(r) × S^q(√(1−r²)) ⊂ Sᵖ⁺q⁺¹, times ℝⁿ⁻ᵖ⁻q⁻¹.
ImmersionSpec product_cone(int p, int q, double r, int n);

/// Graph of a fixed polynomial with distinct quadratic coefficients and
/// cubic terms; generic, not semi-parallel.
ImmersionSpec generic_graph(int n);

// Transforms. Each returns a new spec named after the original.

/// x ↦ c + (x − c)/|x − c|².
ImmersionSpec invert(const ImmersionSpec& spec, const Eigen::VectorXd& center);
ImmersionSpec axis_scale(const ImmersionSpec& spec, const Eigen::VectorXd& factors);
ImmersionSpec translate(const ImmersionSpec& spec, const Eigen::VectorXd& offset);

/// Inverse stereographic chart ℝᵏ → Sᵏ ⊂ ℝᵏ⁺¹, w ↦ (2w, |w|² − 1)/(|w|² + 1).
TaylorVector inverse_stereographic(std::span<const Taylor> w);

// Registry.

struct ParamSchema {
    std::string key;
    double fallback = 0.0;
    bool integer = false;
    std::string help;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    /// Classification branch the construction belongs to.
    std::string branch;
    std::vector<ParamSchema> params;
    bool curve_based = false;
    bool negative_control = false;
    std::function<ImmersionSpec(const std::map<std::string, double>&)> build;
};

/// Stable, alphabetical listing.
const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& find_entry(std::string_view name);

struct EntryName {
    std::string name;
    std::map<std::string, double> params;
};

/// Grammar: `name` or `name?key=value&key=value`; keys must belong to the
/// entry, values are decimal numbers. Missing keys take their defaults.
/// Throws UnknownCatalogEntry or ParamOutOfRange.
EntryName parse_entry_name(std::string_view text);
std::string canonical_name(const EntryName& entry);
ImmersionSpec make_entry(std::string_view text);

/// Metadata keys set on every catalog spec.
inline constexpr const char* kMetaEntry = "entry";
inline constexpr const char* kMetaBranch = "branch";
inline constexpr const char* kMetaCurve = "curve";
inline constexpr const char* kMetaNegative = "negative";

}  // namespace moebiuslab
