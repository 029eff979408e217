#include "moebiuslab/invariants.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

namespace {

Eigen::VectorXd oriented_normal(const Eigen::MatrixXd& D, bool flip) {
    const auto m = D.rows();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeFullU);
    Eigen::VectorXd N = svd.matrixU().col(m - 1);
    Eigen::MatrixXd M(m, m);
    M << D, N;
    if (M.determinant() < 0.0) N = -N;
    return flip ? Eigen::VectorXd(-N) : N;
}

void check_umbilic(double alpha_norm2, double gap) {
    if (!(gap > 1e-10 * std::max(alpha_norm2, 1.0))) {
        throw Error(ErrorCode::UmbilicPoint, "||α||² − nH² vanishes to working precision");
    }
}

// Christoffel symbols Γ^k_ij stored as gamma[(k*n + i)*n + j].
using Christoffel = std::vector<Taylor>;

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// (1,2)-tensor T^k_{ij} from coordinates into the frame F.
double frame_max_abs(const std::vector<double>& t, const Eigen::MatrixXd& F, const Eigen::MatrixXd& Finv, int n) {
    double worst = 0.0;
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j)
                            s += Finv(c, k) * t[static_cast<std::size_t>((k * n + i) * n + j)] * F(i, a) * F(j, b);
                worst = std::max(worst, std::abs(s));
            }
    return worst;
}

Tensor4 to_frame(const Tensor4& R, const Eigen::MatrixXd& F, const Eigen::MatrixXd& Finv) {
    const int n = R.dim();
    Tensor4 a(n), b(n);
    // Contract one slot at a time.
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int p = 0; p < n; ++p) s += R(l, k, i, p) * F(p, j);
                    a(l, k, i, j) = s;
                }
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int p = 0; p < n; ++p) s += a(l, k, p, j) * F(p, i);
                    b(l, k, i, j) = s;
                }
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int p = 0; p < n; ++p) s += b(l, p, i, j) * F(p, k);
                    a(l, k, i, j) = s;
                }
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int p = 0; p < n; ++p) s += Finv(l, p) * a(p, k, i, j);
                    b(l, k, i, j) = s;
                }
    return b;
}

}  // namespace

ClassicalData classical_data(const Jet& jet, bool flip_normal) {
    const int n = jet.n();
    const int m = jet.ambient_dim();
    ClassicalData cd;
    const Eigen::MatrixXd D = jet.differential();
    cd.g = D.transpose() * D;
    cd.N = oriented_normal(D, flip_normal);
    cd.h.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::array<int, 2> idx = {i, j};
            double s = 0.0;
            for (int a = 0; a < m; ++a) s += jet.partial(a, idx) * cd.N(a);
            cd.h(i, j) = s;
        }
    cd.A = cd.g.ldlt().solve(cd.h);
    cd.H = cd.A.trace() / n;
    cd.alpha_norm2 = (cd.A * cd.A).trace();
    return cd;
}

double rho(const ClassicalData& cd, int n) {
    const double gap = cd.alpha_norm2 - n * cd.H * cd.H;
    check_umbilic(cd.alpha_norm2, gap);
    return std::sqrt(n / (n - 1.0) * gap);
}

ShapeOperator moebius_shape_operator(const ClassicalData& cd, double r) {
    const auto n = cd.A.rows();
    ShapeOperator so;
    so.B = (cd.A - cd.H * Eigen::MatrixXd::Identity(n, n)) / r;
    // h v = λ g v gives g-orthonormal eigenvectors directly.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(cd.h, cd.g);
    so.lambda_bar = (es.eigenvalues().array() - cd.H) / r;
    so.eigenframe = es.eigenvectors();
    return so;
}

MoebiusData moebius_data(const Jet& jet, const InvariantOptions& opts) {
    const int n = jet.n();
    const int m = jet.ambient_dim();
    const int order = jet.order();
    if (order < 4) throw std::invalid_argument("moebius_data needs a jet of order 4 or more");
    const auto& f = jet.components();
    const auto un = static_cast<std::size_t>(n);
    auto idx3 = [n](int k, int i, int j) { return static_cast<std::size_t>((k * n + i) * n + j); };

    MoebiusData md;
    md.n = n;
    md.classical = classical_data(jet, opts.flip_normal);

    std::vector<TaylorVector> e(un, TaylorVector(static_cast<std::size_t>(m)));
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < m; ++a) e[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = f[static_cast<std::size_t>(a)].derivative(i);

    TaylorMatrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            g(i, j) = dot(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
            if (j != i) g(j, i) = g(i, j);
        }
    const TaylorMatrix gi = inverse(g);

    // Unit normal: project the oriented normal at the base point onto the
    // normal line of each nearby tangent space.
    const Eigen::VectorXd& N0 = md.classical.N;
    TaylorVector coef(un);
    for (int j = 0; j < n; ++j) {
        Taylor s = e[static_cast<std::size_t>(j)][0] * N0(0);
        for (int a = 1; a < m; ++a) s += e[static_cast<std::size_t>(j)][static_cast<std::size_t>(a)] * N0(a);
        coef[static_cast<std::size_t>(j)] = std::move(s);
    }
    TaylorVector nu(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) nu[static_cast<std::size_t>(a)] = Taylor(N0(a));
    for (int i = 0; i < n; ++i) {
        Taylor c = gi(i, 0) * coef[0];
        for (int j = 1; j < n; ++j) c += gi(i, j) * coef[static_cast<std::size_t>(j)];
        for (int a = 0; a < m; ++a) nu[static_cast<std::size_t>(a)] -= c * e[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
    }
    const Taylor inv_len = reciprocal(sqrt(dot(nu, nu)));
    TaylorVector N(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) N[static_cast<std::size_t>(a)] = nu[static_cast<std::size_t>(a)] * inv_len;

    TaylorMatrix h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Taylor s = e[static_cast<std::size_t>(i)][0].derivative(j) * N[0];
            for (int a = 1; a < m; ++a) s += e[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)].derivative(j) * N[static_cast<std::size_t>(a)];
            h(i, j) = s;
            if (j != i) h(j, i) = s;
        }
    const TaylorMatrix A = gi * h;
    Taylor H = A(0, 0);
    for (int i = 1; i < n; ++i) H += A(i, i);
    H /= static_cast<double>(n);
    Taylor trA2(0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) trA2 += A(i, j) * A(j, i);
    const Taylor gap = trA2 - static_cast<double>(n) * H * H;
    check_umbilic(trA2.value(), gap.value());
    const Taylor rho2 = gap * (n / (n - 1.0));
    const Taylor r = sqrt(rho2);
    const Taylor rinv = reciprocal(r);
    const Taylor rho2inv = rinv * rinv;

    TaylorMatrix B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) B(i, j) = (i == j ? A(i, j) - H : A(i, j)) * rinv;

    TaylorMatrix gs(n, n), gsi(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            gs(i, j) = rho2 * g(i, j);
            gsi(i, j) = rho2inv * gi(i, j);
        }
    std::vector<TaylorMatrix> dgs;
    dgs.reserve(un);
    for (int l = 0; l < n; ++l) dgs.push_back(gs.derivative(l));

    Christoffel gamma(un * un * un);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Taylor s(0.0);
                for (int l = 0; l < n; ++l)
                    s += gsi(k, l) * (dgs[static_cast<std::size_t>(i)](j, l) + dgs[static_cast<std::size_t>(j)](i, l) - dgs[static_cast<std::size_t>(l)](i, j));
                s *= 0.5;
                gamma[idx3(k, i, j)] = s;
                gamma[idx3(k, j, i)] = s;
            }

    TaylorVector drho(un), grad(un), dH(un);
    for (int l = 0; l < n; ++l) {
        drho[static_cast<std::size_t>(l)] = r.derivative(l);
        dH[static_cast<std::size_t>(l)] = H.derivative(l);
    }
    for (int k = 0; k < n; ++k) {
        Taylor s(0.0);
        for (int l = 0; l < n; ++l) s += gsi(k, l) * drho[static_cast<std::size_t>(l)];
        grad[static_cast<std::size_t>(k)] = std::move(s);
    }
    Taylor grad2(0.0);
    for (int l = 0; l < n; ++l) grad2 += drho[static_cast<std::size_t>(l)] * grad[static_cast<std::size_t>(l)];

    TaylorMatrix psi(n, n);
    const Taylor hr = H * rinv;
    const Taylor iso = (grad2 + H * H) * rho2inv * 0.5;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            Taylor hess = grad[static_cast<std::size_t>(k)].derivative(i);
            for (int j = 0; j < n; ++j) hess += gamma[idx3(k, i, j)] * grad[static_cast<std::size_t>(j)];
            Taylor v = hr * B(k, i) - hess * rinv;
            if (k == i) v += iso;
            psi(k, i) = std::move(v);
        }

    TaylorVector omega(un);
    TaylorVector bgrad(un);
    for (int j = 0; j < n; ++j) {
        Taylor s(0.0);
        for (int k = 0; k < n; ++k) s += B(j, k) * grad[static_cast<std::size_t>(k)];
        bgrad[static_cast<std::size_t>(j)] = std::move(s);
    }
    for (int i = 0; i < n; ++i) {
        Taylor s = dH[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) s += gs(i, j) * bgrad[static_cast<std::size_t>(j)];
        omega[static_cast<std::size_t>(i)] = -(s * rinv);
    }

    // Point values.
    md.rho = r.value();
    md.g_star = gs.values();
    md.B = B.values();
    md.psi = psi.values();
    md.omega.resize(n);
    md.grad_rho.resize(n);
    for (int i = 0; i < n; ++i) {
        md.omega(i) = omega[static_cast<std::size_t>(i)].value();
        md.grad_rho(i) = grad[static_cast<std::size_t>(i)].value();
    }
    md.d_omega.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            md.d_omega(i, j) = omega[static_cast<std::size_t>(j)].derivative(i).value() - omega[static_cast<std::size_t>(i)].derivative(j).value();

    std::vector<double> G(gamma.size());
    std::vector<std::vector<double>> dG(un, std::vector<double>(gamma.size()));
    for (std::size_t q = 0; q < gamma.size(); ++q) {
        G[q] = gamma[q].value();
        for (int v = 0; v < n; ++v) dG[static_cast<std::size_t>(v)][q] = gamma[q].derivative(v).value();
    }
    md.R = Tensor4(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = dG[static_cast<std::size_t>(i)][idx3(l, j, k)] - dG[static_cast<std::size_t>(j)][idx3(l, i, k)];
                    for (int p = 0; p < n; ++p) s += G[idx3(l, i, p)] * G[idx3(p, j, k)] - G[idx3(l, j, p)] * G[idx3(p, i, k)];
                    md.R(l, k, i, j) = s;
                }

    // Orthonormal frame and spectra.
    md.frame = orthonormal_frame(md.g_star);
    const Eigen::MatrixXd& F = md.frame;
    const Eigen::MatrixXd Finv = F.transpose() * md.g_star;
    md.B_f = Finv * md.B * F;
    md.psi_f = Finv * md.psi * F;
    md.R_f = to_frame(md.R, F, Finv);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (md.B_f + md.B_f.transpose()));
    md.lambda_bar = es.eigenvalues();
    const Eigen::MatrixXd& Q = es.eigenvectors();
    md.eigenframe = F * Q;
    md.theta = (Q.transpose() * md.psi_f * Q).diagonal();

    const Eigen::MatrixXd comm = md.psi_f * md.B_f - md.B_f * md.psi_f;
    const double denom = md.psi_f.norm() * md.B_f.norm();
    md.commutator_ratio = denom > 0.0 ? comm.norm() / denom : comm.norm();
    md.commutes = md.commutator_ratio < 1e-7;

    double s = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) s += md.R_f(a, b, a, b);
    md.s_star = s / (n * (n - 1.0));

    auto& res = md.residuals;
    res.trace_B = std::abs(md.B_f.trace());
    res.norm_B = std::abs(md.lambda_bar.squaredNorm() - (n - 1.0) / n);
    res.trace_psi = std::abs(md.psi_f.trace() - (n * n * md.s_star + 1.0) / (2.0 * n));

    const Eigen::MatrixXd& Bf = md.B_f;
    const Eigen::MatrixXd& Pf = md.psi_f;
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const double dbk = b == k, dlb = l == b, dla = l == a, dak = a == k;
                    const double rhs = Bf(b, k) * Bf(l, a) - Bf(a, k) * Bf(l, b) + dbk * Pf(l, a) - Pf(a, k) * dlb +
                                       Pf(b, k) * dla - dak * Pf(l, b);
                    res.gauss = std::max(res.gauss, std::abs(md.R_f(l, k, a, b) - rhs));
                    const double cyc = md.R_f(l, k, a, b) + md.R_f(l, a, b, k) + md.R_f(l, b, k, a);
                    res.bianchi = std::max(res.bianchi, std::abs(cyc));
                }

    // dω_ij = ∂_iω_j − ∂_jω_i pairs with ⟨[ψ̂,B]X_j, X_i⟩*.
    const Eigen::MatrixXd dwf = F.transpose() * md.d_omega * F;
    res.ricci = max_abs(dwf - comm);

    // Covariant derivative (∇_i T)^k_j of an endomorphism field at the point.
    auto covariant = [&](const TaylorMatrix& T, const Eigen::MatrixXd& Tv) {
        std::vector<double> out(un * un * un);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) {
                    double s = T(k, j).derivative(i).value();
                    for (int l = 0; l < n; ++l) s += G[idx3(k, i, l)] * Tv(l, j) - Tv(k, l) * G[idx3(l, i, j)];
                    out[idx3(i, k, j)] = s;
                }
        return out;
    };

    Eigen::MatrixXd Bv = md.B;
    for (int i = 0; i < n; ++i) Bv(i, i) += opts.codazzi_perturbation * (i + 1);
    const auto nB = covariant(B, Bv);
    std::vector<double> cod(un * un * un);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double w = (k == j ? md.omega(i) : 0.0) - (k == i ? md.omega(j) : 0.0);
                cod[idx3(k, i, j)] = nB[idx3(i, k, j)] - nB[idx3(j, k, i)] - w;
            }
    res.codazzi_B = frame_max_abs(cod, F, Finv, n);

    if (order >= 5) {
        const auto nP = covariant(psi, md.psi);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double w = md.omega(j) * md.B(k, i) - md.omega(i) * md.B(k, j);
                    cod[idx3(k, i, j)] = nP[idx3(i, k, j)] - nP[idx3(j, k, i)] - w;
                }
        res.codazzi_psi = frame_max_abs(cod, F, Finv, n);
    } else {
        res.codazzi_psi = std::numeric_limits<double>::quiet_NaN();
    }
    return md;
}

MoebiusData evaluate_moebius(const ImmersionSpec& spec, std::span<const double> x, const InvariantOptions& opts) {
    return moebius_data(evaluate_jet(spec, x, kInvariantJetOrder), opts);
}

double sectional_curvature(const MoebiusData& md, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    const int n = md.n;
    Eigen::VectorXd RXYY = Eigen::VectorXd::Zero(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) RXYY(l) += md.R(l, k, i, j) * Y(k) * X(i) * Y(j);
    const Eigen::MatrixXd& gs = md.g_star;
    const double xx = X.dot(gs * X), yy = Y.dot(gs * Y), xy = X.dot(gs * Y);
    return X.dot(gs * RXYY) / (xx * yy - xy * xy);
}

}  // namespace moebiuslab
