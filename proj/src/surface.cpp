#include "moebiuslab/surface.hpp"

#include <algorithm>
#include <stdexcept>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

Eigen::VectorXd SurfaceSpec::position(std::span<const double> x) const {
    TaylorVector args(x.begin(), x.end());
    const TaylorVector out = eval(args);
    Eigen::VectorXd p(static_cast<Eigen::Index>(out.size()));
    for (std::size_t a = 0; a < out.size(); ++a) p(static_cast<Eigen::Index>(a)) = out[a].value();
    return p;
}

namespace {

Eigen::VectorXd values(const TaylorVector& v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].value();
    return out;
}

// Unit Euclidean normal to span(vs), oriented so det[vs | N] > 0, carried as
// a Taylor field by projecting the base-point normal.
TaylorVector unit_normal(const std::vector<TaylorVector>& vs) {
    const auto k = static_cast<int>(vs.size());
    const auto m = static_cast<int>(vs.front().size());
    Eigen::MatrixXd V(m, k);
    for (int j = 0; j < k; ++j) V.col(j) = values(vs[static_cast<std::size_t>(j)]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeFullU);
    if (svd.singularValues()(k - 1) <= 1e-10 * svd.singularValues()(0))
        throw Error(ErrorCode::RankDeficient, "surface chart is not an immersion here");
    Eigen::VectorXd N0 = svd.matrixU().col(m - 1);
    Eigen::MatrixXd M(m, m);
    M << V, N0;
    if (M.determinant() < 0.0) N0 = -N0;

    TaylorMatrix gram(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) gram(i, j) = dot(vs[static_cast<std::size_t>(i)], vs[static_cast<std::size_t>(j)]);
    const TaylorMatrix gi = inverse(gram);
    TaylorVector proj(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        Taylor s(0.0);
        for (int a = 0; a < m; ++a) s += vs[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)] * N0(a);
        proj[static_cast<std::size_t>(j)] = std::move(s);
    }
    TaylorVector nu(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) nu[static_cast<std::size_t>(a)] = Taylor(N0(a));
    for (int i = 0; i < k; ++i) {
        Taylor c(0.0);
        for (int j = 0; j < k; ++j) c += gi(i, j) * proj[static_cast<std::size_t>(j)];
        for (int a = 0; a < m; ++a) nu[static_cast<std::size_t>(a)] -= c * vs[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
    }
    const Taylor inv_len = reciprocal(sqrt(dot(nu, nu)));
    for (auto& v : nu) v *= inv_len;
    return nu;
}

}  // namespace

SurfaceGeometry surface_geometry(const SurfaceSpec& spec, std::span<const double> x, int order) {
    if (x.size() != 2 || !spec.domain.contains(x)) throw Error(ErrorCode::PointOutsideDomain, spec.name + ": point outside the chart");
    if (order < 2) throw std::invalid_argument("surface_geometry needs order ≥ 2");
    const TaylorVector vars = {Taylor::variable(2, order, 0, x[0]), Taylor::variable(2, order, 1, x[1])};
    TaylorVector p = spec.eval(vars);
    if (static_cast<int>(p.size()) != spec.model_dim()) throw std::logic_error(spec.name + ": wrong model dimension");
    for (auto& c : p)
        if (c.is_constant()) c = Taylor::constant(2, order, c.value());

    std::vector<TaylorVector> e(2, TaylorVector(p.size()));
    for (int i = 0; i < 2; ++i)
        for (std::size_t a = 0; a < p.size(); ++a) e[static_cast<std::size_t>(i)][a] = p[a].derivative(i);

    std::vector<TaylorVector> span = e;
    if (spec.c == 1) span.insert(span.begin(), p);
    const TaylorVector N = unit_normal(span);

    TaylorMatrix ge(2, 2), he(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ge(i, j) = dot(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
            Taylor s(0.0);
            for (std::size_t a = 0; a < p.size(); ++a) s += e[static_cast<std::size_t>(i)][a].derivative(j) * N[a];
            he(i, j) = std::move(s);
        }
    const TaylorMatrix Ae = inverse(ge) * he;

    SurfaceGeometry sg;
    sg.point = values(p);
    if (spec.c == -1) {
        const Taylor& z = p[2];
        if (!(z.value() > 0.0)) throw Error(ErrorCode::SurfaceModelMismatch, spec.name + ": point leaves the upper half-space");
        // Conformal change |dz|²/z²: κ_h = z κ_e + N_e,3 for the unit normal z N_e.
        const Taylor zinv2 = reciprocal(z * z);
        sg.metric = TaylorMatrix(2, 2);
        sg.shape = TaylorMatrix(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                sg.metric(i, j) = ge(i, j) * zinv2;
                sg.shape(i, j) = z * Ae(i, j);
                if (i == j) sg.shape(i, j) += N[2];
            }
        sg.normal = z.value() * values(N);
    } else {
        sg.metric = ge;
        sg.shape = Ae;
        sg.normal = values(N);
    }
    sg.H = (sg.shape(0, 0) + sg.shape(1, 1)) * 0.5;
    sg.K = sg.shape(0, 0) * sg.shape(1, 1) - sg.shape(0, 1) * sg.shape(1, 0) + static_cast<double>(spec.c);
    const Eigen::Vector2cd ev = Eigen::Matrix2d(sg.shape.values()).eigenvalues();
    sg.principal = {ev(0).real(), ev(1).real()};
    if (sg.principal(0) > sg.principal(1)) std::swap(sg.principal(0), sg.principal(1));
    return sg;
}

}  // namespace moebiuslab
