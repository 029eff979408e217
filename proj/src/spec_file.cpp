#include "moebiuslab/spec_file.hpp"

#include <fstream>
#include <sstream>

#include "moebiuslab/catalog.hpp"
#include "moebiuslab/errors.hpp"

namespace moebiuslab {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidSpecFile, what); }

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) bad(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) bad(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number_integer()) bad(where + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

std::string text(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_string()) bad(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

Eigen::VectorXd vector(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_array()) bad(where + ": \"" + key + "\" must be an array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) bad(where + ": \"" + key + "\" must be an array of numbers");
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

SurfaceSpec surface_of(const json& s) {
    const std::string where = "surface";
    const std::string kind = text(s, "kind", where);
    if (kind == "clifford-torus") return clifford_torus(number(s, "r", where));
    if (kind == "hyperbolic-cylinder") return hyperbolic_cylinder(number(s, "r", where));
    if (kind == "torus-of-revolution") return torus_of_revolution(number(s, "R", where), number(s, "a", where));
    if (kind != "curve") bad("surface: unknown kind \"" + kind + "\"");

    const int c = integer(s, "c", where);
    if (c < -1 || c > 1) bad("surface: curve model c must be 0, 1 or -1");
    const std::string law = text(s, "law", where);
    const double s_lo = number_or(s, "s_lo", 0.0, where);
    const double s_hi = number_or(s, "s_hi", 2.0, where);
    CurveSpec cs;
    if (law == "exp")
        cs = exponential_law(c, number(s, "a", where), number(s, "b", where), s_lo, s_hi);
    else if (law == "sqrt")
        cs = sqrt_law(c, number(s, "c_law", where), number(s, "b", where), s_lo, s_hi);
    else
        bad("surface: unknown curvature law \"" + law + "\"");
    cs.phi0 = number_or(s, "phi0", 0.0, where);
    auto curve = curve_with_curvature(std::move(cs));
    if (c == 0) return curve_cylinder_surface(curve);
    if (c == 1) return curve_suspension_surface(curve);
    return curve_rotation_surface(curve);
}

ImmersionSpec constructed(const json& doc) {
    const json& s = field(doc, "surface", "spec");
    const SurfaceSpec g = surface_of(s);
    const std::string how = text(doc, "construction", "spec");
    const int n = integer(doc, "n", "spec");
    ImmersionSpec f;
    if (how == "cylinder")
        f = make_cylinder(g, n);
    else if (how == "cone")
        f = make_cone(g, n);
    else if (how == "rotation")
        f = make_rotational(g, n);
    else
        bad("spec: unknown construction \"" + how + "\"");
    if (s.value("kind", "") == "curve") f.metadata[kMetaCurve] = "1";
    return f;
}

ImmersionSpec product_of(const json& p) {
    const std::string where = "product";
    const std::string kind = text(p, "kind", where);
    const int n = integer(p, "n", where);
    if (kind == "cylinder") return standard_cylinder(integer(p, "k", where), n);
    if (kind == "cone") return standard_cone(integer(p, "k", where), n, number_or(p, "r", 0.6, where));
    if (kind == "torus") return standard_torus(integer(p, "k", where), n, number_or(p, "r", 0.6, where));
    if (kind == "cone-product")
        return product_cone(integer(p, "p", where), integer(p, "q", where), number_or(p, "r", 0.6, where), n);
    if (kind == "graph") return generic_graph(n);
    bad("product: unknown kind \"" + kind + "\"");
}

ImmersionSpec transformed(ImmersionSpec f, const json& t, std::size_t index) {
    const std::string where = "transforms[" + std::to_string(index) + "]";
    const std::string op = text(t, "op", where);
    if (op == "axis-scale") {
        f = axis_scale(f, vector(t, "factors", where));
        f.metadata.erase(kMetaBranch);
    } else if (op == "translate") {
        f = translate(f, vector(t, "offset", where));
    } else if (op == "invert") {
        f = invert(f, vector(t, "center", where));
    } else if (op == "perturb") {
        f = perturb(f, integer(t, "component", where), integer(t, "axis", where), number(t, "amplitude", where),
                    number_or(t, "wave", 1.0, where));
        f.metadata.erase(kMetaBranch);
    } else {
        bad(where + ": unknown op \"" + op + "\"");
    }
    return f;
}

}  // namespace

ImmersionSpec perturb(const ImmersionSpec& spec, int component, int axis, double amplitude, double wave) {
    if (component < 0 || component >= spec.ambient_dim())
        throw Error(ErrorCode::ParamOutOfRange, "perturb component out of range");
    if (axis < 0 || axis >= spec.n) throw Error(ErrorCode::ParamOutOfRange, "perturb axis out of range");
    ImmersionSpec f = spec;
    f.name = "perturbed " + spec.name;
    f.eval = [ev = spec.eval, component, axis, amplitude, wave](std::span<const Taylor> x) {
        TaylorVector d = ev(x);
        d[static_cast<std::size_t>(component)] += amplitude * sin(wave * x[static_cast<std::size_t>(axis)]);
        return d;
    };
    return f;
}

ImmersionSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) bad("spec must be a JSON object");
    const int bases = static_cast<int>(doc.contains("entry")) + static_cast<int>(doc.contains("surface")) +
                      static_cast<int>(doc.contains("product"));
    if (bases != 1) bad("spec needs exactly one of \"entry\", \"surface\", \"product\"");

    ImmersionSpec f;
    if (doc.contains("entry"))
        f = make_entry(text(doc, "entry", "spec"));
    else if (doc.contains("surface"))
        f = constructed(doc);
    else
        f = product_of(doc.at("product"));

    if (doc.contains("transforms")) {
        const json& ts = doc.at("transforms");
        if (!ts.is_array()) bad("spec: \"transforms\" must be an array");
        for (std::size_t i = 0; i < ts.size(); ++i) f = transformed(std::move(f), ts[i], i);
    }
    if (doc.contains("metadata")) {
        const json& m = doc.at("metadata");
        if (!m.is_object()) bad("spec: \"metadata\" must be an object");
        for (const auto& [k, v] : m.items()) {
            if (!v.is_string()) bad("spec: metadata values must be strings");
            f.metadata[k] = v.get<std::string>();
        }
    }
    if (doc.contains("name")) f.name = text(doc, "name", "spec");
    return f;
}

ImmersionSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open spec file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
        doc = json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        bad(path + " is not valid JSON: " + e.what());
    }
    return spec_from_json(doc);
}

}  // namespace moebiuslab
