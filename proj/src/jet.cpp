#include "moebiuslab/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "moebiuslab/errors.hpp"

namespace moebiuslab {

double Box::max_width() const {
    double w = 0.0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, width(i));
    return w;
}

Eigen::VectorXd Box::center() const {
    Eigen::VectorXd c(dim());
    for (int i = 0; i < dim(); ++i) c(i) = 0.5 * (lo[static_cast<std::size_t>(i)] + hi[static_cast<std::size_t>(i)]);
    return c;
}

bool Box::contains(std::span<const double> x, double margin) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
        if (x[i] - lo[i] < margin || hi[i] - x[i] < margin) return false;
    }
    return true;
}

Box Box::product(const Box& other) const {
    Box b = *this;
    b.lo.insert(b.lo.end(), other.lo.begin(), other.lo.end());
    b.hi.insert(b.hi.end(), other.hi.begin(), other.hi.end());
    return b;
}

Eigen::VectorXd ImmersionSpec::position(std::span<const double> x) const {
    TaylorVector args(x.begin(), x.end());
    const TaylorVector out = eval(args);
    Eigen::VectorXd p(static_cast<Eigen::Index>(out.size()));
    for (std::size_t a = 0; a < out.size(); ++a) p(static_cast<Eigen::Index>(a)) = out[a].value();
    return p;
}

Jet::Jet(Eigen::VectorXd point, TaylorVector components)
    : point_(std::move(point)), components_(std::move(components)) {}

Eigen::VectorXd Jet::position() const {
    Eigen::VectorXd p(ambient_dim());
    for (int a = 0; a < ambient_dim(); ++a) p(a) = components_[static_cast<std::size_t>(a)].value();
    return p;
}

double Jet::partial(int component, std::span<const int> indices) const {
    std::vector<int> exps(static_cast<std::size_t>(n()), 0);
    for (int i : indices) ++exps[static_cast<std::size_t>(i)];
    return components_[static_cast<std::size_t>(component)].partial(exps);
}

Eigen::MatrixXd Jet::differential() const {
    Eigen::MatrixXd d(ambient_dim(), n());
    for (int a = 0; a < ambient_dim(); ++a)
        for (int i = 0; i < n(); ++i) {
            const std::array<int, 1> idx = {i};
            d(a, i) = partial(a, idx);
        }
    return d;
}

std::vector<double> Jet::tensor(int k) const {
    std::size_t per = 1;
    for (int i = 0; i < k; ++i) per *= static_cast<std::size_t>(n());
    std::vector<double> out(static_cast<std::size_t>(ambient_dim()) * per);
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int a = 0; a < ambient_dim(); ++a) {
        for (std::size_t flat = 0; flat < per; ++flat) {
            std::size_t rem = flat;
            for (int p = k - 1; p >= 0; --p) {
                idx[static_cast<std::size_t>(p)] = static_cast<int>(rem % static_cast<std::size_t>(n()));
                rem /= static_cast<std::size_t>(n());
            }
            out[static_cast<std::size_t>(a) * per + flat] = partial(a, idx);
        }
    }
    return out;
}

namespace {

void check_point(const ImmersionSpec& spec, std::span<const double> x, double margin) {
    if (static_cast<int>(x.size()) != spec.n || !spec.domain.contains(x, margin)) {
        std::ostringstream os;
        os << spec.name << ": point outside the open domain";
        throw Error(ErrorCode::PointOutsideDomain, os.str());
    }
}

void check_rank(const ImmersionSpec& spec, const Eigen::MatrixXd& df) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(df);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || !(s(s.size() - 1) > 1e-10 * s(0))) {
        throw Error(ErrorCode::RankDeficient, spec.name + ": differential does not have full rank");
    }
}

struct Tap {
    int offset;
    double weight;
};

// Second-order central stencils for d^k/dt^k with unit step.
const std::array<std::vector<Tap>, 5>& stencils() {
    static const std::array<std::vector<Tap>, 5> s = {{
        {{0, 1.0}},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    }};
    return s;
}

class StencilEvaluator {
public:
    StencilEvaluator(const ImmersionSpec& spec, std::span<const double> x) : spec_(spec), x_(x.begin(), x.end()) {}

    Eigen::VectorXd difference(double step, std::span<const int> alpha) {
        offsets_.assign(alpha.size(), 0);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(spec_.ambient_dim());
        accumulate(step, alpha, 0, 1.0, acc);
        int total = 0;
        for (int a : alpha) total += a;
        return acc / std::pow(step, total);
    }

private:
    void accumulate(double step, std::span<const int> alpha, std::size_t axis, double weight, Eigen::VectorXd& acc) {
        if (axis == alpha.size()) {
            acc += weight * value_at(step);
            return;
        }
        for (const auto& tap : stencils()[static_cast<std::size_t>(alpha[axis])]) {
            offsets_[axis] = tap.offset;
            accumulate(step, alpha, axis + 1, weight * tap.weight, acc);
        }
        offsets_[axis] = 0;
    }

    Eigen::VectorXd value_at(double step) {
        std::vector<double> p = x_;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += step * offsets_[i];
        return spec_.position(p);
    }

    const ImmersionSpec& spec_;
    std::vector<double> x_;
    std::vector<int> offsets_;
};

}  // namespace

Jet evaluate_jet(const ImmersionSpec& spec, std::span<const double> x, int order, double margin) {
    check_point(spec, x, margin);
    TaylorVector vars;
    vars.reserve(x.size());
    for (int i = 0; i < spec.n; ++i) vars.push_back(Taylor::variable(spec.n, order, i, x[static_cast<std::size_t>(i)]));
    TaylorVector comps = spec.eval(vars);
    if (static_cast<int>(comps.size()) != spec.ambient_dim())
        throw std::logic_error(spec.name + ": chart map returned the wrong number of components");
    for (auto& c : comps) {
        if (c.is_constant()) c = Taylor::constant(spec.n, order, c.value());
    }
    Jet jet(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), std::move(comps));
    check_rank(spec, jet.differential());
    return jet;
}

Jet evaluate_jet_fd(const ImmersionSpec& spec, std::span<const double> x, double h) {
    check_point(spec, x, 0.0);
    if (!(h > 0.0) || !spec.domain.contains(x, 4.0 * h)) {
        throw Error(ErrorCode::StepTooLarge, spec.name + ": finite-difference stencil leaves the domain");
    }
    constexpr int kOrder = 4;
    const auto& basis = MonomialBasis::get(spec.n);
    StencilEvaluator stencil(spec, x);
    TaylorVector comps(static_cast<std::size_t>(spec.ambient_dim()), Taylor::constant(spec.n, kOrder, 0.0));
    for (std::size_t m = 0; m < basis.size(kOrder); ++m) {
        const auto alpha = basis.exponents(m);
        Eigen::VectorXd d;
        if (basis.degree(m) == 0) {
            d = spec.position(x);
        } else {
            d = (4.0 * stencil.difference(h, alpha) - stencil.difference(2.0 * h, alpha)) / 3.0;
        }
        double factorial = 1.0;
        for (int e : alpha)
            for (int k = 2; k <= e; ++k) factorial *= k;
        for (int a = 0; a < spec.ambient_dim(); ++a) comps[static_cast<std::size_t>(a)].coeffs()[m] = d(a) / factorial;
    }
    Jet jet(Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())), std::move(comps));
    check_rank(spec, jet.differential());
    return jet;
}

double relative_tensor_gap(const Jet& a, const Jet& b, int k) {
    const auto ta = a.tensor(k);
    const auto tb = b.tensor(k);
    double scale = 1.0, gap = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        scale = std::max(scale, std::abs(ta[i]));
        gap = std::max(gap, std::abs(ta[i] - tb[i]));
    }
    return gap / scale;
}

std::vector<Eigen::VectorXd> sample_points(const Box& box, int count, std::uint64_t seed, double inset) {
    std::mt19937_64 gen(seed);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int p = 0; p < count; ++p) {
        Eigen::VectorXd x(box.dim());
        for (int i = 0; i < box.dim(); ++i) {
            const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            x(i) = box.lo[static_cast<std::size_t>(i)] + box.width(i) * (inset + (1.0 - 2.0 * inset) * u);
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

}  // namespace moebiuslab
