#include "moebiuslab/semiparallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

std::vector<int> SpectrumReport::multiplicities() const {
    std::vector<int> m;
    m.reserve(clusters.size());
    for (const auto& c : clusters) m.push_back(c.multiplicity);
    return m;
}

SpectrumReport cluster_spectrum(const Eigen::VectorXd& lambda_bar, const Eigen::VectorXd& theta, double tol_cluster) {
    const auto n = lambda_bar.size();
    SpectrumReport rep;
    if (n == 0) return rep;
    const double radius = lambda_bar.cwiseAbs().maxCoeff();
    const double gap_tol = tol_cluster * std::max(1.0, radius);

    std::vector<std::vector<int>> groups{{0}};
    for (Eigen::Index i = 1; i < n; ++i) {
        if (lambda_bar(i) - lambda_bar(i - 1) > gap_tol) groups.emplace_back();
        groups.back().push_back(static_cast<int>(i));
    }
    if (groups.size() == 1) throw Error(ErrorCode::DegenerateSpectrum, "all Moebius principal curvatures coincide");

    for (auto& g : groups) {
        Cluster c;
        c.members = g;
        c.multiplicity = static_cast<int>(g.size());
        for (int i : g) {
            c.lambda += lambda_bar(i);
            c.theta += theta(i);
        }
        c.lambda /= c.multiplicity;
        c.theta /= c.multiplicity;
        c.width = lambda_bar(g.back()) - lambda_bar(g.front());
        c.invariant = c.lambda * c.lambda + 2.0 * c.theta;
        rep.clusters.push_back(std::move(c));
    }
    rep.separation = std::numeric_limits<double>::infinity();
    double widest = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        widest = std::max(widest, rep.clusters[i].width);
        if (i > 0) rep.separation = std::min(rep.separation, lambda_bar(groups[i].front()) - lambda_bar(groups[i - 1].back()));
    }
    rep.indeterminate = !(widest < 0.1 * rep.separation);
    return rep;
}

double semiparallel_direct(const MoebiusData& md) {
    const int n = md.n;
    const Eigen::MatrixXd& B = md.B_f;
    double worst = 0.0;
    Eigen::MatrixXd Rij(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k) Rij(l, k) = md.R_f(l, k, i, j);
            const Eigen::MatrixXd action = Rij * B - B * Rij;
            worst = std::max(worst, action.colwise().norm().maxCoeff());
        }
    return worst;
}

double semiparallel_spectral(const SpectrumReport& report) {
    if (report.indeterminate) throw Error(ErrorCode::IndeterminateSpectrum, "eigenvalue clusters are not well separated");
    double worst = 0.0;
    const auto& cs = report.clusters;
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            worst = std::max(worst, std::abs(cs[i].lambda * cs[j].lambda + cs[i].theta + cs[j].theta));
    return worst;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::SemiParallel: return "SemiParallel";
        case Verdict::NotSemiParallel: return "NotSemiParallel";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

SemiparallelVerdict verdict(double direct, double spectral, double tol) {
    SemiparallelVerdict v{direct, spectral, tol, Verdict::Indeterminate, {}};
    if (direct < tol && spectral < tol) {
        v.verdict = Verdict::SemiParallel;
    } else if (direct > 10.0 * tol && spectral > 10.0 * tol) {
        v.verdict = Verdict::NotSemiParallel;
    } else {
        std::ostringstream os;
        os.precision(3);
        os << "routes disagree or fall in the hysteresis band: direct " << direct << ", spectral " << spectral
           << ", tol " << tol;
        v.diagnostic = os.str();
    }
    return v;
}

namespace {

double nearest_invariant(const SpectrumReport& rep, double lambda) {
    const Cluster* best = &rep.clusters.front();
    for (const auto& c : rep.clusters)
        if (std::abs(c.lambda - lambda) < std::abs(best->lambda - lambda)) best = &c;
    return best->invariant;
}

}  // namespace

std::vector<WarpedResidual> check_warped_product(const ImmersionSpec& spec, std::span<const double> x,
                                               const MoebiusData& md, const SpectrumReport& report,
                                               double tol_cluster) {
    std::vector<WarpedResidual> out;
    const double h = 1e-4 * spec.domain.max_width();
    const Eigen::Map<const Eigen::VectorXd> base(x.data(), static_cast<Eigen::Index>(x.size()));
    auto invariant_at = [&](const Eigen::VectorXd& p, double lambda) {
        const MoebiusData m = moebius_data(evaluate_jet(spec, std::span<const double>(p.data(), x.size()), 4));
        return nearest_invariant(cluster_spectrum(m.lambda_bar, m.theta, tol_cluster), lambda);
    };
    for (std::size_t c = 0; c < report.clusters.size(); ++c) {
        const Cluster& cl = report.clusters[c];
        if (cl.multiplicity < 2) continue;
        double worst = 0.0;
        for (int k : cl.members) {
            const Eigen::VectorXd X = md.eigenframe.col(k);
            const double len = X.norm();
            const Eigen::VectorXd dir = X / len;
            const double plus = invariant_at(base + h * dir, cl.lambda);
            const double minus = invariant_at(base - h * dir, cl.lambda);
            worst = std::max(worst, std::abs(len * (plus - minus) / (2.0 * h)));
        }
        out.push_back({static_cast<int>(c), worst});
    }
    return out;
}

CondMResidual check_cond_m(const SurfaceSpec& surface, std::span<const double> x, int n) {
    const SurfaceGeometry sg = surface_geometry(surface, x, 4);
    const Taylor radicand = 4.0 * sg.H * sg.H - (2.0 * n / (n - 1.0)) * (sg.K - static_cast<double>(surface.c));
    if (!(radicand.value() > 1e-12)) throw Error(ErrorCode::NonRealMu, surface.name + ": 4H² − 2n/(n−1)(K − c) ≤ 0");
    const Taylor u = pow(radicand, -0.5);

    const TaylorMatrix& g = sg.metric;
    const TaylorMatrix gi = inverse(g);
    const std::array<TaylorMatrix, 2> dg = {g.derivative(0), g.derivative(1)};
    std::array<Taylor, 8> gamma;  // Γ^k_ij at (k*2 + i)*2 + j
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                Taylor s(0.0);
                for (int l = 0; l < 2; ++l)
                    s += gi(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) - dg[static_cast<std::size_t>(l)](i, j));
                gamma[static_cast<std::size_t>((k * 2 + i) * 2 + j)] = s * 0.5;
            }
    const std::array<Taylor, 2> du = {u.derivative(0), u.derivative(1)};

    const Eigen::Matrix2d gv = g.values();
    const Eigen::Matrix2d giv = gi.values();
    const Eigen::Vector2d duv(du[0].value(), du[1].value());
    Eigen::Matrix2d hess;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double s = du[static_cast<std::size_t>(i)].derivative(j).value();
            for (int k = 0; k < 2; ++k) s -= gamma[static_cast<std::size_t>((k * 2 + i) * 2 + j)].value() * duv(k);
            hess(i, j) = s;
        }
    const double K = sg.K.value();
    const double uv = u.value();
    const Eigen::MatrixXd F = orthonormal_frame(gv);
    const Eigen::MatrixXd cond2 = F.transpose() * (hess + K * uv * gv) * F;

    CondMResidual r;
    r.mu = 1.0 / uv;
    r.K = K;
    r.cond_i = std::abs(duv.dot(giv * duv) + K * uv * uv);
    r.cond_ii = cond2.cwiseAbs().maxCoeff();
    return r;
}

}  // namespace moebiuslab
