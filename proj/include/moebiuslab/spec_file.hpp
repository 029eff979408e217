#pragma once

#include <string>

#include <json.hpp>

#include "moebiuslab/jet.hpp"

namespace moebiuslab {

/// External hypersurface description. One JSON object with exactly one base:
///
///   {"entry": "cone-clifford?r=0.7071&n=4"}
///   {"surface": {...}, "construction": "cylinder" | "cone" | "rotation", "n": 4}
///   {"product": {"kind": "cylinder" | "cone" | "torus" | "cone-product" | "graph", ...}}
///
/// Surfaces: {"kind": "clifford-torus", "r"}, {"kind": "hyperbolic-cylinder", "r"},
/// {"kind": "torus-of-revolution", "R", "a"}, or {"kind": "curve", "c",
/// "law": "exp" | "sqrt", "a", "b", "s_lo", "s_hi", "phi0"} where the sqrt law
/// reads "c_law" for its slope. Curves in Q²_0, Q²_1, Q²_−1 pair with the
/// cylinder, cone and rotation constructions respectively.
///
/// Optional keys: "name", "metadata" (string values, merged over the
/// base's), and "transforms", applied in order:
///   {"op": "axis-scale", "factors": [...]}
///   {"op": "translate", "offset": [...]}
///   {"op": "invert", "center": [...]}
///   {"op": "perturb", "component": i, "axis": j, "amplitude": ε, "wave": k}
/// where perturb adds ε sin(k x_j) to ambient component i.
///
/// Throws InvalidSpecFile for malformed documents; construction errors
/// (ParamOutOfRange, SurfaceModelMismatch, UnknownCatalogEntry) propagate.
ImmersionSpec spec_from_json(const nlohmann::ordered_json& doc);
ImmersionSpec load_spec_file(const std::string& path);

/// Perturbation used by the "perturb" transform.
ImmersionSpec perturb(const ImmersionSpec& spec, int component, int axis, double amplitude, double wave);

}  // namespace moebiuslab
