#include "moebiuslab/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

namespace {

Box cube(int dim, double lo, double hi) {
    return Box{std::vector<double>(static_cast<std::size_t>(dim), lo), std::vector<double>(static_cast<std::size_t>(dim), hi)};
}

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::ParamOutOfRange, what);
}

void require_model(const SurfaceSpec& g, int c, const char* construction) {
    if (g.c != c)
        throw Error(ErrorCode::SurfaceModelMismatch,
                    std::string(construction) + " needs a surface in Q³_" + std::to_string(c) + ", got " + g.name);
}

void append(TaylorVector& out, std::span<const Taylor> xs) { out.insert(out.end(), xs.begin(), xs.end()); }

void scale(TaylorVector& v, const Taylor& t) {
    for (auto& c : v) c = t * c;
}

}  // namespace

TaylorVector inverse_stereographic(std::span<const Taylor> w) {
    Taylor s2(0.0);
    for (const auto& wi : w) s2 += wi * wi;
    const Taylor d = reciprocal(s2 + 1.0);
    TaylorVector out;
    out.reserve(w.size() + 1);
    for (const auto& wi : w) out.push_back(2.0 * wi * d);
    out.push_back((s2 - 1.0) * d);
    return out;
}

SurfaceSpec clifford_torus(double r) {
    require(r > 0.0 && r < 1.0, "clifford torus needs 0 < r < 1");
    const double s = std::sqrt(1.0 - r * r);
    SurfaceSpec g;
    g.name = "clifford-torus(r=" + fmt(r) + ")";
    g.c = 1;
    g.domain = cube(2, 0.1, 6.0);
    g.eval = [r, s](std::span<const Taylor> x) {
        return TaylorVector{r * cos(x[0]), r * sin(x[0]), s * cos(x[1]), s * sin(x[1])};
    };
    g.params = {{"r", fmt(r)}};
    return g;
}

SurfaceSpec hyperbolic_cylinder(double r) {
    require(r > 0.0, "hyperbolic cylinder needs r > 0");
    SurfaceSpec g;
    g.name = "hyperbolic-cylinder(r=" + fmt(r) + ")";
    g.c = -1;
    g.domain = Box{{-1.0, -3.0}, {1.0, 3.0}};
    g.eval = [r](std::span<const Taylor> x) {
        const Taylor e = exp(x[0]);
        return TaylorVector{r * e * cos(x[1]), r * e * sin(x[1]), e};
    };
    g.params = {{"r", fmt(r)}};
    return g;
}

SurfaceSpec torus_of_revolution(double R, double a) {
    require(a > 0.0 && R > a, "torus of revolution needs R > a > 0");
    SurfaceSpec g;
    g.name = "torus-of-revolution(R=" + fmt(R) + ",a=" + fmt(a) + ")";
    g.c = 0;
    g.domain = Box{{-1.0, -3.0}, {1.0, 3.0}};
    g.eval = [R, a](std::span<const Taylor> x) {
        const Taylor w = R + a * cos(x[0]);
        return TaylorVector{w * cos(x[1]), w * sin(x[1]), a * sin(x[0])};
    };
    g.params = {{"R", fmt(R)}, {"a", fmt(a)}};
    return g;
}

SurfaceSpec curve_cylinder_surface(std::shared_ptr<const IntegratedCurve> curve) {
    const CurveSpec& cs = curve->spec();
    require(cs.c == 0, "curve cylinder needs a plane curve");
    SurfaceSpec g;
    g.name = "curve-cylinder(" + cs.name + ")";
    g.c = 0;
    g.domain = Box{{cs.s_lo, -1.0}, {cs.s_hi, 1.0}};
    g.eval = [curve](std::span<const Taylor> x) {
        TaylorVector p = curve->position(x[0]);
        p.push_back(x[1]);
        return p;
    };
    return g;
}

SurfaceSpec curve_suspension_surface(std::shared_ptr<const IntegratedCurve> curve) {
    const CurveSpec& cs = curve->spec();
    require(cs.c == 1, "curve suspension needs a spherical curve");
    SurfaceSpec g;
    g.name = "curve-suspension(" + cs.name + ")";
    g.c = 1;
    g.domain = Box{{cs.s_lo, -0.7}, {cs.s_hi, 0.7}};
    g.eval = [curve](std::span<const Taylor> x) {
        TaylorVector p = curve->position(x[0]);
        scale(p, cos(x[1]));
        p.push_back(sin(x[1]));
        return p;
    };
    return g;
}

SurfaceSpec curve_rotation_surface(std::shared_ptr<const IntegratedCurve> curve) {
    const CurveSpec& cs = curve->spec();
    require(cs.c == -1, "curve rotation needs a curve in the hyperbolic plane");
    SurfaceSpec g;
    g.name = "curve-rotation(" + cs.name + ")";
    g.c = -1;
    g.domain = Box{{cs.s_lo, -1.0}, {cs.s_hi, 1.0}};
    g.eval = [curve](std::span<const Taylor> x) {
        const TaylorVector p = curve->position(x[0]);
        return TaylorVector{p[0], p[1] * sin(x[1]), p[1] * cos(x[1])};
    };
    return g;
}

ImmersionSpec make_cylinder(const SurfaceSpec& g, int n) {
    require_model(g, 0, "cylinder");
    require(n >= 3, "cylinder needs n ≥ 3");
    ImmersionSpec f;
    f.name = "cylinder over " + g.name;
    f.n = n;
    f.domain = g.domain.product(cube(n - 2, -1.0, 1.0));
    f.eval = [ge = g.eval](std::span<const Taylor> x) {
        TaylorVector out = ge(x.first(2));
        append(out, x.subspan(2));
        return out;
    };
    return f;
}

ImmersionSpec make_cone(const SurfaceSpec& g, int n) {
    require_model(g, 1, "cone");
    require(n >= 3, "cone needs n ≥ 3");
    ImmersionSpec f;
    f.name = "cone over " + g.name;
    f.n = n;
    f.domain = g.domain.product(Box{{0.5}, {2.0}}).product(cube(n - 3, -1.0, 1.0));
    f.eval = [ge = g.eval](std::span<const Taylor> x) {
        TaylorVector out = ge(x.first(2));
        scale(out, x[2]);
        append(out, x.subspan(3));
        return out;
    };
    return f;
}

ImmersionSpec make_rotational(const SurfaceSpec& g, int n) {
    require_model(g, -1, "rotational hypersurface");
    require(n >= 3, "rotational hypersurface needs n ≥ 3");
    ImmersionSpec f;
    f.name = "rotational over " + g.name;
    f.n = n;
    f.domain = g.domain.product(cube(n - 2, -1.0, 1.0));
    f.eval = [ge = g.eval](std::span<const Taylor> x) {
        const TaylorVector z = ge(x.first(2));
        TaylorVector out{z[0], z[1]};
        TaylorVector y = inverse_stereographic(x.subspan(2));
        scale(y, z[2]);
        append(out, y);
        return out;
    };
    return f;
}

ImmersionSpec standard_cylinder(int k, int n) {
    require(n >= 3 && k >= 1 && k <= n - 1, "standard cylinder needs 1 ≤ k ≤ n−1, n ≥ 3");
    ImmersionSpec f;
    f.name = "S^" + std::to_string(k) + "xR^" + std::to_string(n - k);
    f.n = n;
    f.domain = cube(n, -1.0, 1.0);
    f.eval = [k](std::span<const Taylor> x) {
        TaylorVector out = inverse_stereographic(x.first(static_cast<std::size_t>(k)));
        append(out, x.subspan(static_cast<std::size_t>(k)));
        return out;
    };
    return f;
}

ImmersionSpec standard_cone(int k, int n, double r) {
    require(n >= 3 && k >= 1 && k <= n - 1, "standard cone needs 1 ≤ k ≤ n−1, n ≥ 3");
    require(r > 0.0 && r < 1.0, "standard cone needs 0 < r < 1");
    const double s = std::sqrt(1.0 - r * r);
    ImmersionSpec f;
    f.name = "S^" + std::to_string(k) + "xH^" + std::to_string(n - k);
    f.n = n;
    f.domain = cube(k, -1.0, 1.0).product(Box{{0.5}, {2.0}}).product(cube(n - k - 1, -1.0, 1.0));
    f.eval = [k, r, s](std::span<const Taylor> x) {
        const auto ku = static_cast<std::size_t>(k);
        TaylorVector out = inverse_stereographic(x.first(ku));
        scale(out, r * x[ku]);
        out.push_back(s * x[ku]);
        append(out, x.subspan(ku + 1));
        return out;
    };
    return f;
}

ImmersionSpec standard_torus(int k, int n, double r) {
    require(n >= 3 && k >= 1 && k <= n - 1, "standard torus needs 1 ≤ k ≤ n−1, n ≥ 3");
    require(r > 0.0 && r < 1.0, "standard torus needs 0 < r < 1");
    const double s = std::sqrt(1.0 - r * r);
    ImmersionSpec f;
    f.name = "S^" + std::to_string(k) + "xS^" + std::to_string(n - k);
    f.n = n;
    f.domain = cube(n, -1.0, 1.0);
    f.eval = [k, r, s](std::span<const Taylor> x) {
        const auto ku = static_cast<std::size_t>(k);
        TaylorVector p = inverse_stereographic(x.first(ku));
        scale(p, Taylor(r));
        TaylorVector q = inverse_stereographic(x.subspan(ku));
        scale(q, Taylor(s));
        append(p, q);
        // Stereographic projection of Sⁿ⁺¹ from (1, 0, …, 0); p₀ ≤ r < 1.
        const Taylor d = reciprocal(1.0 - p[0]);
        TaylorVector out(p.begin() + 1, p.end());
        scale(out, d);
        return out;
    };
    return f;
}

ImmersionSpec product_cone(int p, int q, double r, int n) {
    require(p >= 1 && q >= 1 && p + q + 1 <= n, "product cone needs p, q ≥ 1 and p + q + 1 ≤ n");
    require(r > 0.0 && r < 1.0, "product cone needs 0 < r < 1");
    const double s = std::sqrt(1.0 - r * r);
    ImmersionSpec f;
    f.name = "cone over S^" + std::to_string(p) + "xS^" + std::to_string(q) + " times R^" + std::to_string(n - p - q - 1);
    f.n = n;
    f.domain = cube(p + q, -1.0, 1.0).product(Box{{0.5}, {2.0}}).product(cube(n - p - q - 1, -1.0, 1.0));
    f.eval = [p, q, r, s](std::span<const Taylor> x) {
        const auto pu = static_cast<std::size_t>(p);
        const auto qu = static_cast<std::size_t>(q);
        const Taylor& t = x[pu + qu];
        TaylorVector out = inverse_stereographic(x.first(pu));
        scale(out, r * t);
        TaylorVector b = inverse_stereographic(x.subspan(pu, qu));
        scale(b, s * t);
        append(out, b);
        append(out, x.subspan(pu + qu + 1));
        return out;
    };
    return f;
}

ImmersionSpec generic_graph(int n) {
    require(n >= 3 && n <= 8, "generic graph needs 3 ≤ n ≤ 8");
    ImmersionSpec f;
    f.name = "graph(n=" + std::to_string(n) + ")";
    f.n = n;
    f.domain = cube(n, -0.4, 0.4);
    f.eval = [n](std::span<const Taylor> x) {
        Taylor phi(0.0);
        for (int i = 0; i < n; ++i) {
            const Taylor& xi = x[static_cast<std::size_t>(i)];
            phi += (0.5 * (1.0 + 0.37 * i)) * xi * xi + (0.2 * (i + 1) / n) * xi * xi * xi;
        }
        phi += 0.15 * x[0] * x[1] * x[2];
        TaylorVector out(x.begin(), x.end());
        out.push_back(phi);
        return out;
    };
    return f;
}

ImmersionSpec invert(const ImmersionSpec& spec, const Eigen::VectorXd& center) {
    require(center.size() == spec.ambient_dim(), "inversion center has the wrong dimension");
    ImmersionSpec f = spec;
    f.name = "inversion of " + spec.name;
    f.eval = [ev = spec.eval, center](std::span<const Taylor> x) {
        TaylorVector d = ev(x);
        Taylor q(0.0);
        for (std::size_t a = 0; a < d.size(); ++a) {
            d[a] -= center(static_cast<Eigen::Index>(a));
            q += d[a] * d[a];
        }
        const Taylor inv = reciprocal(q);
        for (std::size_t a = 0; a < d.size(); ++a) d[a] = d[a] * inv + center(static_cast<Eigen::Index>(a));
        return d;
    };
    return f;
}

ImmersionSpec axis_scale(const ImmersionSpec& spec, const Eigen::VectorXd& factors) {
    require(factors.size() == spec.ambient_dim(), "axis scale has the wrong dimension");
    require((factors.array() != 0.0).all(), "axis scale factors must be nonzero");
    ImmersionSpec f = spec;
    f.name = "axis-scaled " + spec.name;
    f.eval = [ev = spec.eval, factors](std::span<const Taylor> x) {
        TaylorVector d = ev(x);
        for (std::size_t a = 0; a < d.size(); ++a) d[a] *= factors(static_cast<Eigen::Index>(a));
        return d;
    };
    return f;
}

ImmersionSpec translate(const ImmersionSpec& spec, const Eigen::VectorXd& offset) {
    require(offset.size() == spec.ambient_dim(), "translation has the wrong dimension");
    ImmersionSpec f = spec;
    f.name = "translated " + spec.name;
    f.eval = [ev = spec.eval, offset](std::span<const Taylor> x) {
        TaylorVector d = ev(x);
        for (std::size_t a = 0; a < d.size(); ++a) d[a] += offset(static_cast<Eigen::Index>(a));
        return d;
    };
    return f;
}

// Registry.

namespace {

using Params = std::map<std::string, double>;

int int_param(const Params& p, const char* key) { return static_cast<int>(std::lround(p.at(key))); }

CatalogEntry entry(std::string name, std::string branch, std::string description, std::vector<ParamSchema> params,
                   std::function<ImmersionSpec(const Params&)> build) {
    CatalogEntry e;
    e.name = std::move(name);
    e.branch = std::move(branch);
    e.description = std::move(description);
    e.params = std::move(params);
    e.build = std::move(build);
    return e;
}

std::vector<CatalogEntry> build_registry() {
    const ParamSchema n4{"n", 4, true, "hypersurface dimension"};
    std::vector<CatalogEntry> all;

    all.push_back(entry("cone", "TwoCurv-ii", "standard cone S^k x H^(n-k)",
                        {{"k", 1, true, "sphere factor dimension"}, n4, {"r", 0.6, false, "sphere radius in S^(k+1)"}},
                        [](const Params& p) { return standard_cone(int_param(p, "k"), int_param(p, "n"), p.at("r")); }));
    all.push_back(entry("cone-clifford", "ThreeCurv-ConeClifford", "cone over the Clifford torus S^1(r) x S^1(sqrt(1-r^2))",
                        {{"r", std::numbers::sqrt2 / 2.0, false, "first circle radius"}, n4},
                        [](const Params& p) { return make_cone(clifford_torus(p.at("r")), int_param(p, "n")); }));
    {
        auto e = entry("cone-clifford-ellipsoid", "NotSemiParallel",
                       "cone over the Clifford torus stretched along the first axis",
                       {{"r", std::numbers::sqrt2 / 2.0, false, "first circle radius"}, n4,
                        {"ratio", 1.2, false, "axis ratio"}},
                       [](const Params& p) {
                           const ImmersionSpec base = make_cone(clifford_torus(p.at("r")), int_param(p, "n"));
                           require(p.at("ratio") > 0.0, "axis ratio must be positive");
                           Eigen::VectorXd factors = Eigen::VectorXd::Ones(base.ambient_dim());
                           factors(0) = p.at("ratio");
                           return axis_scale(base, factors);
                       });
        e.negative_control = true;
        all.push_back(std::move(e));
    }
    all.push_back(entry("cone-product", "ThreeCurv-MoebiusParallel", "cone over S^p(r) x S^q(sqrt(1-r^2)) times R^(n-p-q-1)",
                        {{"p", 1, true, "first sphere dimension"}, {"q", 2, true, "second sphere dimension"},
                         {"r", 0.6, false, "first sphere radius"}, {"n", 5, true, "hypersurface dimension"}},
                        [](const Params& p) {
                            return product_cone(int_param(p, "p"), int_param(p, "q"), p.at("r"), int_param(p, "n"));
                        }));
    {
        auto e = entry("cone-spiral", "TwoCurv-iv", "generalized cone over a spherical curve with curvature b e^(as)",
                       {{"a", 0.3, false, "curvature growth rate"}, {"b", 1.0, false, "curvature at s = 0"}, n4},
                       [](const Params& p) {
                           auto curve = curve_with_curvature(exponential_law(1, p.at("a"), p.at("b"), 0.0, 2.0));
                           return make_cone(curve_suspension_surface(curve), int_param(p, "n"));
                       });
        e.curve_based = true;
        all.push_back(std::move(e));
    }
    {
        auto e = entry("cyl-spiral", "TwoCurv-iv", "cylinder over a plane curve with curvature b e^(as)",
                       {{"a", 0.3, false, "curvature growth rate"}, {"b", 1.0, false, "curvature at s = 0"}, n4},
                       [](const Params& p) {
                           auto curve = curve_with_curvature(exponential_law(0, p.at("a"), p.at("b"), 0.0, 2.0));
                           return make_cylinder(curve_cylinder_surface(curve), int_param(p, "n"));
                       });
        e.curve_based = true;
        all.push_back(std::move(e));
    }
    all.push_back(entry("cyl-torus", "none", "cylinder over a torus of revolution in R^3",
                        {{"R", 2.0, false, "center circle radius"}, {"a", 1.0, false, "tube radius"}, n4},
                        [](const Params& p) {
                            return make_cylinder(torus_of_revolution(p.at("R"), p.at("a")), int_param(p, "n"));
                        }));
    all.push_back(entry("cylinder", "TwoCurv-i", "standard cylinder S^k x R^(n-k)",
                        {{"k", 1, true, "sphere factor dimension"}, n4},
                        [](const Params& p) { return standard_cylinder(int_param(p, "k"), int_param(p, "n")); }));
    {
        auto e = entry("graph", "NotSemiParallel", "graph of a polynomial with distinct quadratic and cubic terms", {n4},
                       [](const Params& p) { return generic_graph(int_param(p, "n")); });
        e.negative_control = true;
        all.push_back(std::move(e));
    }
    {
        auto e = entry("rot-exp", "none", "rotational hypersurface over a hyperbolic curve with curvature b e^(as)",
                       {{"a", 0.3, false, "curvature growth rate"}, {"b", 1.0, false, "curvature at s = 0"}, n4,
                        {"phi0", 0.0, false, "initial direction angle"}},
                       [](const Params& p) {
                           CurveSpec cs = exponential_law(-1, p.at("a"), p.at("b"), 0.0, 2.0);
                           cs.phi0 = p.at("phi0");
                           return make_rotational(curve_rotation_surface(curve_with_curvature(cs)), int_param(p, "n"));
                       });
        e.curve_based = true;
        all.push_back(std::move(e));
    }
    all.push_back(entry("rot-hypcyl", "ThreeCurv-RotHypCylinder", "rotational hypersurface over the hyperbolic cylinder",
                        {{"r", 1.0, false, "circle radius"}, {"n", 5, true, "hypersurface dimension"}},
                        [](const Params& p) {
                            return make_rotational(hyperbolic_cylinder(p.at("r")), int_param(p, "n"));
                        }));
    {
        auto e = entry("rot-sqrt", "TwoCurv-v", "rotational hypersurface over a hyperbolic curve with curvature 1/sqrt(cs+b)",
                       {{"c", 1.0, false, "slope under the root"}, {"b", 1.0, false, "offset under the root"}, n4,
                        {"phi0", 0.0, false, "initial direction angle"}},
                       [](const Params& p) {
                           require(p.at("c") > 0.0 && p.at("b") > 0.0, "square-root law needs c, b > 0");
                           CurveSpec cs = sqrt_law(-1, p.at("c"), p.at("b"), 0.0, 2.0);
                           cs.phi0 = p.at("phi0");
                           return make_rotational(curve_rotation_surface(curve_with_curvature(cs)), int_param(p, "n"));
                       });
        e.curve_based = true;
        all.push_back(std::move(e));
    }
    all.push_back(entry("torus", "TwoCurv-iii", "standard torus S^k(r) x S^(n-k)(sqrt(1-r^2)), stereographically projected",
                        {{"k", 2, true, "first sphere dimension"}, n4, {"r", 0.6, false, "first sphere radius"}},
                        [](const Params& p) { return standard_torus(int_param(p, "k"), int_param(p, "n"), p.at("r")); }));

    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return all;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = build_registry();
    return entries;
}

const CatalogEntry& find_entry(std::string_view name) {
    for (const auto& e : catalog_entries())
        if (e.name == name) return e;
    throw Error(ErrorCode::UnknownCatalogEntry, "no catalog entry named '" + std::string(name) + "'");
}

EntryName parse_entry_name(std::string_view text) {
    const auto q = text.find('?');
    const CatalogEntry& e = find_entry(text.substr(0, q));
    EntryName out{e.name, {}};
    for (const auto& ps : e.params) out.params[ps.key] = ps.fallback;
    if (q == std::string_view::npos) return out;

    std::string_view rest = text.substr(q + 1);
    while (!rest.empty()) {
        const auto amp = rest.find('&');
        const std::string_view kv = rest.substr(0, amp);
        rest = amp == std::string_view::npos ? std::string_view{} : rest.substr(amp + 1);
        const auto eq = kv.find('=');
        if (eq == std::string_view::npos) throw Error(ErrorCode::ParamOutOfRange, "expected key=value, got '" + std::string(kv) + "'");
        const std::string key(kv.substr(0, eq));
        const std::string_view val = kv.substr(eq + 1);
        const auto it = std::find_if(e.params.begin(), e.params.end(), [&](const auto& ps) { return ps.key == key; });
        if (it == e.params.end()) throw Error(ErrorCode::ParamOutOfRange, e.name + " has no parameter '" + key + "'");
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (ec != std::errc{} || ptr != val.data() + val.size() || !std::isfinite(v))
            throw Error(ErrorCode::ParamOutOfRange, "parameter '" + key + "' is not a number: '" + std::string(val) + "'");
        if (it->integer && v != std::round(v)) throw Error(ErrorCode::ParamOutOfRange, "parameter '" + key + "' must be an integer");
        out.params[key] = v;
    }
    return out;
}

std::string canonical_name(const EntryName& en) {
    const CatalogEntry& e = find_entry(en.name);
    std::string s = e.name;
    char sep = '?';
    for (const auto& ps : e.params) {
        s += sep;
        s += ps.key + "=" + fmt(en.params.at(ps.key));
        sep = '&';
    }
    return s;
}

ImmersionSpec make_entry(std::string_view text) {
    const EntryName en = parse_entry_name(text);
    const CatalogEntry& e = find_entry(en.name);
    ImmersionSpec spec = e.build(en.params);
    spec.metadata[kMetaEntry] = canonical_name(en);
    spec.metadata[kMetaBranch] = e.branch;
    if (e.curve_based) spec.metadata[kMetaCurve] = "1";
    if (e.negative_control) spec.metadata[kMetaNegative] = "1";
    return spec;
}

}  // namespace moebiuslab
